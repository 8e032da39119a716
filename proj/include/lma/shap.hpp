#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lma/forest.hpp"

namespace lma {

/// Per-feature Shapley contributions for one prediction. For exact methods
/// base_value + sum(phi) equals the explained class output to 1e-9.
struct Attribution {
    double base_value = 0.0;
    std::vector<double> phi;
    int explained_class = 0;
    int predicted_class = -1;
    std::string sample_id;
};

/// Scalar model f(x) to explain, e.g. one class probability.
using ModelFn = std::function<double(const std::vector<double>&)>;

/// Coalition game: value of the subset of "present" features.
using CoalitionValueFn = std::function<double(const std::vector<bool>& present)>;

/// Exact path-dependent Shapley values of one class probability, averaged
/// over the forest's trees. Base value is the cover-weighted expectation.
Attribution tree_shap(const ForestModel& model, const std::vector<double>& x,
                      int class_index);

/// Single-tree variant (the forest result is the mean of these).
Attribution tree_shap_single(const Tree& tree, const std::vector<double>& x,
                             int class_index);

/// Cover-weighted conditional expectation of a tree: present features follow
/// x, absent splits average both children by training cover.
double tree_expected_value(const Tree& tree, const std::vector<double>& x,
                           const std::vector<bool>& present, int class_index);

/// Exact Shapley by enumerating all coalitions of `subset` (<= 12 features);
/// features outside the subset stay permanently present. Throws on larger
/// subsets.
Attribution brute_force_shapley(const CoalitionValueFn& value, int n_features,
                                const std::vector<int>& subset);

/// Background-imputation game for an arbitrary model: absent features are
/// replaced by each background row in turn and the outputs averaged.
CoalitionValueFn background_value_fn(const ModelFn& model, const std::vector<double>& x,
                                     const std::vector<std::vector<double>>& background);

/// Shapley-kernel weighted least squares over sampled coalitions, masked
/// features imputed from the background set. Enumerates every coalition when
/// the budget allows, making the estimate exact. Additivity is enforced by
/// the constrained regression. A singular system doubles the sample budget
/// and retries once before throwing.
Attribution kernel_shap(const ModelFn& model, const std::vector<double>& x,
                        const std::vector<std::vector<double>>& background,
                        int n_samples, std::uint64_t seed);

/// Seeded k-medoids subsample, used to pick a compact background set.
std::vector<std::vector<double>> k_medoids(const std::vector<std::vector<double>>& points,
                                           int k, std::uint64_t seed, int iterations = 20);

struct SummaryTable {
    std::vector<double> mean_abs_phi;                  // global, per feature
    std::vector<int> ranking;                          // descending, ties by index
    std::map<int, std::vector<double>> per_class;      // keyed by predicted class
    std::map<int, std::vector<double>> per_class_mean; // signed mean phi
};

SummaryTable summarize(const std::vector<Attribution>& attributions);

}  // namespace lma
