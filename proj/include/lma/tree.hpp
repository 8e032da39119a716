#pragma once

#include <cstdint>
#include <vector>

namespace lma {

using Matrix = std::vector<std::vector<double>>;

struct TreeParams {
    int max_depth = -1;          // -1 = unlimited
    int min_leaf_samples = 1;
    int features_per_split = 0;  // 0 = all features
};

/// CART classification tree, Gini criterion. Nodes are stored flat; leaves
/// keep their training class counts and every node keeps its cover (number
/// of training samples that reached it) for path-dependent attribution.
struct Tree {
    struct Node {
        int feature = -1;  // -1 = leaf
        double threshold = 0.0;
        int left = -1, right = -1;
        double cover = 0.0;
        std::vector<double> class_counts;  // leaves only
    };
    std::vector<Node> nodes;
    int n_classes = 0;

    bool is_leaf(int i) const { return nodes[i].feature < 0; }
    int leaf_for(const std::vector<double>& x) const;
    /// Leaf class frequencies for one sample.
    std::vector<double> predict_proba(const std::vector<double>& x) const;
    int max_depth() const;
    /// Feature indices appearing on any internal node.
    std::vector<int> active_features() const;
};

/// Greedy best-split training over a seeded random feature subset per node.
/// Splits stop at purity, max_depth or min_leaf_samples; ties between equal
/// gains go to the lowest feature index, then the lowest threshold.
Tree train_tree(const Matrix& X, const std::vector<int>& y, int n_classes,
                const TreeParams& params, std::uint64_t seed);

/// As train_tree but on a subset of rows given by `indices` (with repeats).
Tree train_tree_on(const Matrix& X, const std::vector<int>& y, int n_classes,
                   const std::vector<int>& indices, const TreeParams& params,
                   std::uint64_t seed);

}  // namespace lma
