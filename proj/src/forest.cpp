#include "lma/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "lma/parallel.hpp"

namespace lma {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

int argmax_lowest(const std::vector<double>& v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

std::vector<double> ForestModel::predict_proba(const std::vector<double>& x) const {
    std::vector<double> proba(n_classes, 0.0);
    for (const auto& tree : trees) {
        auto p = tree.predict_proba(x);
        for (int c = 0; c < n_classes; ++c) proba[c] += p[c];
    }
    for (double& p : proba) p /= static_cast<double>(trees.size());
    return proba;
}

Prediction ForestModel::predict(const std::vector<double>& x) const {
    Prediction out;
    out.class_probabilities = predict_proba(x);
    out.label = argmax_lowest(out.class_probabilities);
    return out;
}

ForestModel train_forest(const Matrix& X, const std::vector<int>& y, int n_classes,
                         const ForestParams& params, std::uint64_t seed, int jobs) {
    if (X.empty() || X.size() != y.size())
        throw std::invalid_argument("train_forest: empty data or size mismatch");
    if (params.n_trees < 1) throw std::invalid_argument("train_forest: n_trees must be >= 1");

    // Canonical sample order: the model is a function of the sample multiset,
    // not of the order rows happened to arrive in.
    std::vector<int> order(X.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (X[a] != X[b]) return X[a] < X[b];
        return y[a] < y[b];
    });
    Matrix Xs(X.size());
    std::vector<int> ys(y.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        Xs[i] = X[order[i]];
        ys[i] = y[order[i]];
    }

    TreeParams tp;
    tp.max_depth = params.max_depth;
    tp.min_leaf_samples = params.min_leaf_samples;
    tp.features_per_split = params.features_per_split > 0
                                ? params.features_per_split
                                : static_cast<int>(std::lround(std::sqrt(
                                      static_cast<double>(X[0].size()))));

    ForestModel model;
    model.n_classes = n_classes;
    model.params = params;
    model.seed = seed;
    model.trees.resize(params.n_trees);

    const int n = static_cast<int>(Xs.size());
    parallel_for(params.n_trees, jobs, [&](std::size_t t) {
        std::uint64_t tree_seed = mix_seed(seed, t);
        std::vector<int> idx(n);
        if (params.bootstrap) {
            std::mt19937_64 rng(mix_seed(tree_seed, 0x0b00u));
            std::uniform_int_distribution<int> pick(0, n - 1);
            for (int i = 0; i < n; ++i) idx[i] = pick(rng);
            std::sort(idx.begin(), idx.end());
        } else {
            std::iota(idx.begin(), idx.end(), 0);
        }
        model.trees[t] = train_tree_on(Xs, ys, n_classes, idx, tp, tree_seed);
    });
    return model;
}

}  // namespace lma
