#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lma/tree.hpp"

namespace lma {

struct ForestParams {
    int n_trees = 100;
    int max_depth = -1;
    int min_leaf_samples = 1;
    int features_per_split = 0;  // 0 = round(sqrt(d))
    bool bootstrap = true;
};

struct Prediction {
    int label = -1;
    std::vector<double> class_probabilities;
};

struct ForestModel {
    std::vector<Tree> trees;
    int n_classes = 0;
    std::uint64_t schema_hash = 0;
    ForestParams params;
    std::uint64_t seed = 0;
    std::vector<std::string> class_names;

    /// Mean of per-tree leaf class frequencies.
    std::vector<double> predict_proba(const std::vector<double>& x) const;
    /// Argmax of predict_proba, ties to the lowest class index.
    Prediction predict(const std::vector<double>& x) const;
};

/// Bootstrap-aggregated CART trees. Training input is canonicalized (sorted)
/// first and per-tree RNG streams derive from (seed, tree index), so the
/// model depends only on the sample multiset and the seed.
ForestModel train_forest(const Matrix& X, const std::vector<int>& y, int n_classes,
                         const ForestParams& params, std::uint64_t seed, int jobs = 1);

/// splitmix64 stream mix, shared by everything that derives sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

int argmax_lowest(const std::vector<double>& v);

}  // namespace lma
