#include "lma/cv.hpp"

#include <algorithm>
#include <iostream>
#include <random>
#include <set>
#include <stdexcept>

#include "lma/parallel.hpp"

namespace lma {

ModelFamily family_from_string(const std::string& s) {
    if (s == "rf" || s == "forest" || s == "random_forest") return ModelFamily::RandomForest;
    if (s == "svm") return ModelFamily::Svm;
    throw std::invalid_argument("unknown model family '" + s + "' (expected rf or svm)");
}

std::string to_string(ModelFamily f) {
    return f == ModelFamily::RandomForest ? "rf" : "svm";
}

CvPlan CvPlan::grouped(const std::vector<std::string>& group_keys, int k,
                       std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("cv: k must be >= 2");
    std::map<std::string, std::vector<int>> members;
    for (std::size_t i = 0; i < group_keys.size(); ++i)
        members[group_keys[i]].push_back(static_cast<int>(i));

    std::vector<std::string> groups;
    for (const auto& [g, _] : members) groups.push_back(g);
    std::mt19937_64 rng(seed);
    std::shuffle(groups.begin(), groups.end(), rng);
    // largest groups first, each to the currently smallest fold
    std::stable_sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
        return members[a].size() > members[b].size();
    });

    CvPlan plan;
    plan.k = k;
    plan.fold_of.assign(group_keys.size(), -1);
    std::vector<std::size_t> fold_size(k, 0);
    for (const auto& g : groups) {
        int target = 0;
        for (int f = 1; f < k; ++f)
            if (fold_size[f] < fold_size[target]) target = f;
        for (int i : members[g]) plan.fold_of[i] = target;
        fold_size[target] += members[g].size();
    }
    return plan;
}

void CvPlan::validate(std::size_t n_samples) const {
    if (fold_of.size() != n_samples)
        throw std::invalid_argument("cv plan does not cover every sample");
    for (int f : fold_of)
        if (f < 0 || f >= k) throw std::invalid_argument("cv plan: fold index out of range");
}

ForestParams forest_params_from(const ParamMap& p) {
    ForestParams fp;
    auto get = [&](const char* key, double dflt) {
        auto it = p.find(key);
        return it == p.end() ? dflt : it->second;
    };
    fp.n_trees = static_cast<int>(get("n_trees", fp.n_trees));
    fp.max_depth = static_cast<int>(get("max_depth", fp.max_depth));
    fp.min_leaf_samples = static_cast<int>(get("min_leaf_samples", fp.min_leaf_samples));
    fp.features_per_split = static_cast<int>(get("features_per_split", fp.features_per_split));
    fp.bootstrap = get("bootstrap", 1.0) != 0.0;
    return fp;
}

SvmParams svm_params_from(const ParamMap& p) {
    SvmParams sp;
    auto get = [&](const char* key, double dflt) {
        auto it = p.find(key);
        return it == p.end() ? dflt : it->second;
    };
    sp.lambda = get("lambda", sp.lambda);
    sp.epochs = static_cast<int>(get("epochs", sp.epochs));
    sp.learning_rate = get("learning_rate", sp.learning_rate);
    return sp;
}

const ParamMap& GridResult::best_params() const {
    if (best_index < 0) throw std::runtime_error("grid search: every cell failed");
    return cells[best_index].params;
}

std::vector<ParamMap> expand_grid(const ParamGrid& grid) {
    std::vector<ParamMap> cells{{}};
    for (const auto& [name, values] : grid) {
        if (values.empty()) throw std::invalid_argument("grid axis '" + name + "' is empty");
        std::vector<ParamMap> next;
        next.reserve(cells.size() * values.size());
        for (const auto& cell : cells)
            for (double v : values) {
                ParamMap m = cell;
                m[name] = v;
                next.push_back(std::move(m));
            }
        cells = std::move(next);
    }
    return cells;
}

namespace {

struct FoldData {
    Matrix X_train, X_val;
    std::vector<int> y_train, y_val;
};

FoldData split_fold(const Matrix& X, const std::vector<int>& y, const CvPlan& plan,
                    int fold) {
    FoldData d;
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (plan.fold_of[i] == fold) {
            d.X_val.push_back(X[i]);
            d.y_val.push_back(y[i]);
        } else {
            d.X_train.push_back(X[i]);
            d.y_train.push_back(y[i]);
        }
    }
    return d;
}

std::vector<int> fit_predict(const Matrix& X_train, const std::vector<int>& y_train,
                             const Matrix& X_val, int n_classes, ModelFamily family,
                             const ParamMap& params, std::uint64_t seed, int jobs) {
    std::vector<int> pred(X_val.size());
    if (family == ModelFamily::RandomForest) {
        auto model = train_forest(X_train, y_train, n_classes, forest_params_from(params),
                                  seed, jobs);
        for (std::size_t i = 0; i < X_val.size(); ++i) pred[i] = model.predict(X_val[i]).label;
    } else {
        auto model = train_svm(X_train, y_train, n_classes, svm_params_from(params), seed);
        for (std::size_t i = 0; i < X_val.size(); ++i) pred[i] = model.predict(X_val[i]).label;
    }
    return pred;
}

}  // namespace

GridResult grid_search_cv(const Matrix& X, const std::vector<int>& y, int n_classes,
                          ModelFamily family, const ParamGrid& grid, const CvPlan& plan,
                          std::uint64_t seed, int jobs) {
    if (grid.empty()) throw std::invalid_argument("grid search: empty grid");
    plan.validate(X.size());

    GridResult result;
    auto cells = expand_grid(grid);
    result.cells.resize(cells.size());

    std::vector<FoldData> folds;
    for (int f = 0; f < plan.k; ++f) folds.push_back(split_fold(X, y, plan, f));

    for (std::size_t c = 0; c < cells.size(); ++c) {
        GridCell& cell = result.cells[c];
        cell.params = cells[c];
        try {
            double acc_sum = 0.0;
            for (int f = 0; f < plan.k; ++f) {
                const auto& fd = folds[f];
                if (fd.X_train.empty() || fd.X_val.empty())
                    throw std::runtime_error("fold " + std::to_string(f) + " is empty");
                auto pred = fit_predict(fd.X_train, fd.y_train, fd.X_val, n_classes, family,
                                        cell.params, mix_seed(seed, f), jobs);
                int correct = 0;
                for (std::size_t i = 0; i < pred.size(); ++i)
                    if (pred[i] == fd.y_val[i]) ++correct;
                double acc = static_cast<double>(correct) / static_cast<double>(pred.size());
                cell.fold_accuracy.push_back(acc);
                acc_sum += acc;
            }
            cell.mean_accuracy = acc_sum / plan.k;
        } catch (const std::exception& e) {
            cell.failed = true;
            cell.error = e.what();
            std::cerr << "warning: grid cell " << c << " failed: " << e.what() << "\n";
        }
        if (!cell.failed &&
            (result.best_index < 0 ||
             cell.mean_accuracy > result.cells[result.best_index].mean_accuracy))
            result.best_index = static_cast<int>(c);
    }
    return result;
}

std::vector<int> cv_predict(const Matrix& X, const std::vector<int>& y, int n_classes,
                            ModelFamily family, const ParamMap& params,
                            const CvPlan& plan, std::uint64_t seed, int jobs) {
    plan.validate(X.size());
    std::vector<int> pred(X.size(), -1);
    for (int f = 0; f < plan.k; ++f) {
        Matrix X_train;
        std::vector<int> y_train, val_idx;
        for (std::size_t i = 0; i < X.size(); ++i) {
            if (plan.fold_of[i] == f) {
                val_idx.push_back(static_cast<int>(i));
            } else {
                X_train.push_back(X[i]);
                y_train.push_back(y[i]);
            }
        }
        Matrix X_val;
        for (int i : val_idx) X_val.push_back(X[i]);
        auto fold_pred =
            fit_predict(X_train, y_train, X_val, n_classes, family, params, mix_seed(seed, f), jobs);
        for (std::size_t i = 0; i < val_idx.size(); ++i) pred[val_idx[i]] = fold_pred[i];
    }
    return pred;
}

}  // namespace lma
