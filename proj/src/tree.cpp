#include "lma/tree.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace lma {

int Tree::leaf_for(const std::vector<double>& x) const {
    int i = 0;
    while (!is_leaf(i))
        i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
    return i;
}

std::vector<double> Tree::predict_proba(const std::vector<double>& x) const {
    const auto& counts = nodes[leaf_for(x)].class_counts;
    double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    std::vector<double> proba(counts.size(), 0.0);
    if (total > 0.0)
        for (std::size_t c = 0; c < counts.size(); ++c) proba[c] = counts[c] / total;
    return proba;
}

int Tree::max_depth() const {
    std::vector<std::pair<int, int>> stack{{0, 0}};
    int deepest = 0;
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (!is_leaf(i)) {
            stack.push_back({nodes[i].left, d + 1});
            stack.push_back({nodes[i].right, d + 1});
        }
    }
    return deepest;
}

std::vector<int> Tree::active_features() const {
    std::vector<int> feats;
    for (const auto& n : nodes)
        if (n.feature >= 0) feats.push_back(n.feature);
    std::sort(feats.begin(), feats.end());
    feats.erase(std::unique(feats.begin(), feats.end()), feats.end());
    return feats;
}

namespace {

double gini(const std::vector<double>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double sumsq = 0.0;
    for (double c : counts) sumsq += c * c;
    return 1.0 - sumsq / (total * total);
}

struct Builder {
    const Matrix& X;
    const std::vector<int>& y;
    int n_classes;
    TreeParams params;
    std::mt19937_64 rng;
    Tree tree;

    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double gain = -1.0;
    };

    std::vector<int> candidate_features() {
        const int d = static_cast<int>(X[0].size());
        int k = params.features_per_split;
        if (k <= 0 || k >= d) {
            std::vector<int> all(d);
            std::iota(all.begin(), all.end(), 0);
            return all;
        }
        // partial Fisher-Yates, then ascending order for the tie-break rule
        std::vector<int> pool(d);
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < k; ++i) {
            std::uniform_int_distribution<int> pick(i, d - 1);
            std::swap(pool[i], pool[pick(rng)]);
        }
        pool.resize(k);
        std::sort(pool.begin(), pool.end());
        return pool;
    }

    Split best_split(const std::vector<int>& idx, const std::vector<double>& counts,
                     const std::vector<int>& features) {
        const double n = static_cast<double>(idx.size());
        const double parent = gini(counts, n);
        Split best;
        std::vector<std::pair<double, int>> vals(idx.size());
        std::vector<double> left_counts(n_classes);
        for (int f : features) {
            for (std::size_t i = 0; i < idx.size(); ++i)
                vals[i] = {X[idx[i]][f], y[idx[i]]};
            std::sort(vals.begin(), vals.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            std::fill(left_counts.begin(), left_counts.end(), 0.0);
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                left_counts[vals[i].second] += 1.0;
                if (vals[i].first == vals[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = n - nl;
                if (nl < params.min_leaf_samples || nr < params.min_leaf_samples) continue;
                double sumsq_l = 0.0, sumsq_r = 0.0;
                for (int c = 0; c < n_classes; ++c) {
                    sumsq_l += left_counts[c] * left_counts[c];
                    const double rc = counts[c] - left_counts[c];
                    sumsq_r += rc * rc;
                }
                const double gini_l = 1.0 - sumsq_l / (nl * nl);
                const double gini_r = 1.0 - sumsq_r / (nr * nr);
                const double gain = parent - (nl * gini_l + nr * gini_r) / n;
                const double threshold = vals[i].first + 0.5 * (vals[i + 1].first - vals[i].first);
                if (gain > best.gain) {
                    best = {f, threshold, gain};
                }
            }
        }
        return best;
    }

    int build(const std::vector<int>& idx, int depth) {
        std::vector<double> counts(n_classes, 0.0);
        for (int i : idx) counts[y[i]] += 1.0;
        const bool pure =
            std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;

        const int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[node_id].cover = static_cast<double>(idx.size());

        bool stop = pure || (params.max_depth >= 0 && depth >= params.max_depth) ||
                    static_cast<int>(idx.size()) < 2 * params.min_leaf_samples;
        Split split;
        if (!stop) {
            split = best_split(idx, counts, candidate_features());
            // a restricted feature draw can be all-constant; retry with every
            // feature before giving up on the node
            if (split.feature < 0 && params.features_per_split > 0) {
                std::vector<int> all(X[0].size());
                std::iota(all.begin(), all.end(), 0);
                split = best_split(idx, counts, all);
            }
            if (split.feature < 0) stop = true;
        }
        if (stop) {
            tree.nodes[node_id].class_counts = std::move(counts);
            return node_id;
        }

        std::vector<int> left_idx, right_idx;
        for (int i : idx)
            (X[i][split.feature] <= split.threshold ? left_idx : right_idx).push_back(i);
        tree.nodes[node_id].feature = split.feature;
        tree.nodes[node_id].threshold = split.threshold;
        tree.nodes[node_id].left = build(left_idx, depth + 1);
        tree.nodes[node_id].right = build(right_idx, depth + 1);
        return node_id;
    }
};

}  // namespace

Tree train_tree_on(const Matrix& X, const std::vector<int>& y, int n_classes,
                   const std::vector<int>& indices, const TreeParams& params,
                   std::uint64_t seed) {
    if (X.empty() || X.size() != y.size())
        throw std::invalid_argument("train_tree: empty data or size mismatch");
    for (int i : indices)
        if (y[i] < 0 || y[i] >= n_classes)
            throw std::invalid_argument("train_tree: label out of range");
    Builder b{X, y, n_classes, params, std::mt19937_64(seed), {}};
    b.tree.n_classes = n_classes;
    b.build(indices, 0);
    return std::move(b.tree);
}

Tree train_tree(const Matrix& X, const std::vector<int>& y, int n_classes,
                const TreeParams& params, std::uint64_t seed) {
    std::vector<int> all(X.size());
    std::iota(all.begin(), all.end(), 0);
    return train_tree_on(X, y, n_classes, all, params, seed);
}

}  // namespace lma
