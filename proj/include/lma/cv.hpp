#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lma/forest.hpp"
#include "lma/svm.hpp"

namespace lma {

enum class ModelFamily { RandomForest, Svm };

ModelFamily family_from_string(const std::string& s);
std::string to_string(ModelFamily f);

/// Grouped k-fold assignment: all samples sharing a group key (sequence id)
/// land in the same fold, folds balanced by sample count.
struct CvPlan {
    int k = 3;
    std::vector<int> fold_of;

    static CvPlan grouped(const std::vector<std::string>& group_keys, int k,
                          std::uint64_t seed);
    void validate(std::size_t n_samples) const;
};

using ParamMap = std::map<std::string, double>;

ForestParams forest_params_from(const ParamMap& p);
SvmParams svm_params_from(const ParamMap& p);

struct GridCell {
    ParamMap params;
    double mean_accuracy = 0.0;
    std::vector<double> fold_accuracy;
    bool failed = false;
    std::string error;
};

struct GridResult {
    std::vector<GridCell> cells;
    int best_index = -1;  // -1 when every cell failed

    const ParamMap& best_params() const;
};

/// Ordered param grid; cells enumerate the Cartesian product with the last
/// axis fastest, matching the declaration order for tie-breaks.
using ParamGrid = std::vector<std::pair<std::string, std::vector<double>>>;

std::vector<ParamMap> expand_grid(const ParamGrid& grid);

/// Trains one model per (cell, fold) on identical fold splits and scores
/// validation accuracy; best cell = highest mean accuracy, ties to the
/// earliest cell. Failed cells are excluded with a note.
GridResult grid_search_cv(const Matrix& X, const std::vector<int>& y, int n_classes,
                          ModelFamily family, const ParamGrid& grid, const CvPlan& plan,
                          std::uint64_t seed, int jobs = 1);

/// Out-of-fold predictions for every sample under one parameter set.
std::vector<int> cv_predict(const Matrix& X, const std::vector<int>& y, int n_classes,
                            ModelFamily family, const ParamMap& params,
                            const CvPlan& plan, std::uint64_t seed, int jobs = 1);

}  // namespace lma
