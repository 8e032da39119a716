#include "lma/shap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace lma {

namespace {

struct PathElement {
    int feature = -1;
    double zero_fraction = 1.0;
    double one_fraction = 1.0;
    double pweight = 1.0;
};

void extend_path(std::vector<PathElement>& path, double zero_fraction,
                 double one_fraction, int feature) {
    const int d = static_cast<int>(path.size());
    path.push_back({feature, zero_fraction, one_fraction, d == 0 ? 1.0 : 0.0});
    for (int i = d - 1; i >= 0; --i) {
        path[i + 1].pweight += one_fraction * path[i].pweight * (i + 1) / (d + 1);
        path[i].pweight = zero_fraction * path[i].pweight * (d - i) / (d + 1);
    }
}

void unwind_path(std::vector<PathElement>& path, int index) {
    const int d = static_cast<int>(path.size()) - 1;
    const double one_fraction = path[index].one_fraction;
    const double zero_fraction = path[index].zero_fraction;
    double next_one_portion = path[d].pweight;
    for (int i = d - 1; i >= 0; --i) {
        if (one_fraction != 0.0) {
            const double tmp = path[i].pweight;
            path[i].pweight = next_one_portion * (d + 1) / ((i + 1) * one_fraction);
            next_one_portion = tmp - path[i].pweight * zero_fraction * (d - i) / (d + 1);
        } else {
            path[i].pweight = path[i].pweight * (d + 1) / (zero_fraction * (d - i));
        }
    }
    for (int i = index; i < d; ++i) {
        path[i].feature = path[i + 1].feature;
        path[i].zero_fraction = path[i + 1].zero_fraction;
        path[i].one_fraction = path[i + 1].one_fraction;
    }
    path.pop_back();
}

double unwound_path_sum(const std::vector<PathElement>& path, int index) {
    const int d = static_cast<int>(path.size()) - 1;
    const double one_fraction = path[index].one_fraction;
    const double zero_fraction = path[index].zero_fraction;
    double next_one_portion = path[d].pweight;
    double total = 0.0;
    if (one_fraction != 0.0) {
        for (int i = d - 1; i >= 0; --i) {
            const double tmp = next_one_portion / ((i + 1) * one_fraction);
            total += tmp;
            next_one_portion = path[i].pweight - tmp * zero_fraction * (d - i);
        }
    } else {
        for (int i = d - 1; i >= 0; --i)
            total += path[i].pweight / (zero_fraction * (d - i));
    }
    return total * (d + 1);
}

double leaf_value(const Tree::Node& node, int class_index) {
    double total = std::accumulate(node.class_counts.begin(), node.class_counts.end(), 0.0);
    return total > 0.0 ? node.class_counts[class_index] / total : 0.0;
}

void tree_shap_recurse(const Tree& tree, int node_index, std::vector<PathElement> path,
                       double parent_zero_fraction, double parent_one_fraction,
                       int parent_feature, const std::vector<double>& x, int class_index,
                       std::vector<double>& phi) {
    extend_path(path, parent_zero_fraction, parent_one_fraction, parent_feature);
    const auto& node = tree.nodes[node_index];

    if (tree.is_leaf(node_index)) {
        const double value = leaf_value(node, class_index);
        for (int i = 1; i < static_cast<int>(path.size()); ++i) {
            const double w = unwound_path_sum(path, i);
            phi[path[i].feature] += w * (path[i].one_fraction - path[i].zero_fraction) * value;
        }
        return;
    }

    const bool goes_left = x[node.feature] <= node.threshold;
    const int hot = goes_left ? node.left : node.right;
    const int cold = goes_left ? node.right : node.left;
    const double hot_zero_fraction = tree.nodes[hot].cover / node.cover;
    const double cold_zero_fraction = tree.nodes[cold].cover / node.cover;

    double incoming_zero_fraction = 1.0;
    double incoming_one_fraction = 1.0;
    // undo any earlier split on this feature along the path
    int path_index = 0;
    for (; path_index < static_cast<int>(path.size()); ++path_index)
        if (path[path_index].feature == node.feature) break;
    if (path_index != static_cast<int>(path.size())) {
        incoming_zero_fraction = path[path_index].zero_fraction;
        incoming_one_fraction = path[path_index].one_fraction;
        unwind_path(path, path_index);
    }

    tree_shap_recurse(tree, hot, path, hot_zero_fraction * incoming_zero_fraction,
                      incoming_one_fraction, node.feature, x, class_index, phi);
    tree_shap_recurse(tree, cold, path, cold_zero_fraction * incoming_zero_fraction, 0.0,
                      node.feature, x, class_index, phi);
}

double tree_base_value(const Tree& tree, int node_index, int class_index) {
    const auto& node = tree.nodes[node_index];
    if (tree.is_leaf(node_index)) return leaf_value(node, class_index);
    const double wl = tree.nodes[node.left].cover / node.cover;
    const double wr = tree.nodes[node.right].cover / node.cover;
    return wl * tree_base_value(tree, node.left, class_index) +
           wr * tree_base_value(tree, node.right, class_index);
}

}  // namespace

Attribution tree_shap_single(const Tree& tree, const std::vector<double>& x,
                             int class_index) {
    Attribution attr;
    attr.explained_class = class_index;
    attr.phi.assign(x.size(), 0.0);
    tree_shap_recurse(tree, 0, {}, 1.0, 1.0, -1, x, class_index, attr.phi);
    attr.base_value = tree_base_value(tree, 0, class_index);
    return attr;
}

Attribution tree_shap(const ForestModel& model, const std::vector<double>& x,
                      int class_index) {
    if (class_index < 0 || class_index >= model.n_classes)
        throw std::invalid_argument("tree_shap: class index out of range");
    Attribution attr;
    attr.explained_class = class_index;
    attr.phi.assign(x.size(), 0.0);
    for (const auto& tree : model.trees) {
        auto one = tree_shap_single(tree, x, class_index);
        for (std::size_t f = 0; f < x.size(); ++f) attr.phi[f] += one.phi[f];
        attr.base_value += one.base_value;
    }
    const double n = static_cast<double>(model.trees.size());
    for (double& p : attr.phi) p /= n;
    attr.base_value /= n;
    attr.predicted_class = model.predict(x).label;
    return attr;
}

double tree_expected_value(const Tree& tree, const std::vector<double>& x,
                           const std::vector<bool>& present, int class_index) {
    struct Walker {
        const Tree& tree;
        const std::vector<double>& x;
        const std::vector<bool>& present;
        int cls;
        double walk(int i) const {
            const auto& node = tree.nodes[i];
            if (tree.is_leaf(i)) return leaf_value(node, cls);
            if (present[node.feature])
                return walk(x[node.feature] <= node.threshold ? node.left : node.right);
            const double wl = tree.nodes[node.left].cover / node.cover;
            const double wr = tree.nodes[node.right].cover / node.cover;
            return wl * walk(node.left) + wr * walk(node.right);
        }
    };
    return Walker{tree, x, present, class_index}.walk(0);
}

Attribution brute_force_shapley(const CoalitionValueFn& value, int n_features,
                                const std::vector<int>& subset) {
    const int k = static_cast<int>(subset.size());
    if (k > 12)
        throw std::invalid_argument("brute_force_shapley: refusing subsets above 12 features");

    // factorial table up to 12
    std::vector<double> fact(k + 1, 1.0);
    for (int i = 1; i <= k; ++i) fact[i] = fact[i - 1] * i;

    Attribution attr;
    attr.phi.assign(n_features, 0.0);
    std::vector<bool> mask(n_features, true);
    for (int f : subset) mask[f] = false;
    attr.base_value = value(mask);

    // cache all 2^k coalition values
    const std::uint32_t n_coalitions = 1u << k;
    std::vector<double> v(n_coalitions);
    for (std::uint32_t bits = 0; bits < n_coalitions; ++bits) {
        std::vector<bool> m = mask;
        for (int i = 0; i < k; ++i)
            if (bits & (1u << i)) m[subset[i]] = true;
        v[bits] = value(m);
    }

    for (int i = 0; i < k; ++i) {
        double phi = 0.0;
        for (std::uint32_t bits = 0; bits < n_coalitions; ++bits) {
            if (bits & (1u << i)) continue;
            const int s = std::popcount(bits);
            const double weight = fact[s] * fact[k - s - 1] / fact[k];
            phi += weight * (v[bits | (1u << i)] - v[bits]);
        }
        attr.phi[subset[i]] = phi;
    }
    return attr;
}

CoalitionValueFn background_value_fn(const ModelFn& model, const std::vector<double>& x,
                                     const std::vector<std::vector<double>>& background) {
    if (background.empty())
        throw std::invalid_argument("background_value_fn: empty background");
    return [&model, x, background](const std::vector<bool>& present) {
        double total = 0.0;
        std::vector<double> probe(x.size());
        for (const auto& z : background) {
            for (std::size_t f = 0; f < x.size(); ++f) probe[f] = present[f] ? x[f] : z[f];
            total += model(probe);
        }
        return total / static_cast<double>(background.size());
    };
}

namespace {

// Gaussian elimination with partial pivoting; returns false when singular.
bool solve_linear(std::vector<std::vector<double>> A, std::vector<double> b,
                  std::vector<double>& out) {
    const int n = static_cast<int>(A.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[pivot][col])) pivot = r;
        if (std::abs(A[pivot][col]) < 1e-12) return false;
        std::swap(A[col], A[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = col + 1; r < n; ++r) {
            const double m = A[r][col] / A[col][col];
            for (int c = col; c < n; ++c) A[r][c] -= m * A[col][c];
            b[r] -= m * b[col];
        }
    }
    out.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= A[r][c] * out[c];
        out[r] = s / A[r][r];
    }
    return true;
}

struct Coalition {
    std::vector<bool> present;
    double weight = 1.0;
};

bool kernel_shap_attempt(const ModelFn& model, const std::vector<double>& x,
                         const std::vector<std::vector<double>>& background,
                         int n_samples, std::uint64_t seed, Attribution& attr) {
    const int M = static_cast<int>(x.size());
    auto value = background_value_fn(model, x, background);

    const double fx = model(x);
    const double base = value(std::vector<bool>(M, false));
    const double delta = fx - base;

    attr.phi.assign(M, 0.0);
    attr.base_value = base;
    if (M == 1) {
        attr.phi[0] = delta;
        return true;
    }

    // kernel weight of a coalition of size s among M features
    auto kernel_weight = [M](int s) {
        double log_binom = std::lgamma(M + 1) - std::lgamma(s + 1) - std::lgamma(M - s + 1);
        return (M - 1.0) / (std::exp(log_binom) * s * (M - s));
    };

    std::vector<Coalition> coalitions;
    const bool enumerate_all =
        M <= 30 && (1ull << M) - 2 <= static_cast<std::uint64_t>(n_samples);
    if (enumerate_all) {
        for (std::uint64_t bits = 1; bits + 1 < (1ull << M); ++bits) {
            Coalition c;
            c.present.assign(M, false);
            int s = 0;
            for (int f = 0; f < M; ++f)
                if (bits & (1ull << f)) {
                    c.present[f] = true;
                    ++s;
                }
            c.weight = kernel_weight(s);
            coalitions.push_back(std::move(c));
        }
    } else {
        std::mt19937_64 rng(seed);
        std::vector<double> size_weights;
        for (int s = 1; s < M; ++s) size_weights.push_back((M - 1.0) / (s * (M - s)));
        std::discrete_distribution<int> pick_size(size_weights.begin(), size_weights.end());
        std::vector<int> order(M);
        std::iota(order.begin(), order.end(), 0);
        for (int i = 0; i < n_samples; ++i) {
            const int s = pick_size(rng) + 1;
            std::shuffle(order.begin(), order.end(), rng);
            Coalition c;
            c.present.assign(M, false);
            for (int j = 0; j < s; ++j) c.present[order[j]] = true;
            coalitions.push_back(std::move(c));
        }
    }

    // Weighted least squares with the additivity constraint eliminated via
    // the last feature: phi_last = delta - sum(others).
    const int n_free = M - 1;
    std::vector<std::vector<double>> AtA(n_free, std::vector<double>(n_free, 0.0));
    std::vector<double> Atb(n_free, 0.0);
    std::vector<double> design(n_free);
    for (const auto& c : coalitions) {
        const double y = value(c.present) - base - (c.present[M - 1] ? delta : 0.0);
        const double z_last = c.present[M - 1] ? 1.0 : 0.0;
        for (int f = 0; f < n_free; ++f)
            design[f] = (c.present[f] ? 1.0 : 0.0) - z_last;
        for (int r = 0; r < n_free; ++r) {
            if (design[r] == 0.0) continue;
            for (int cc = 0; cc < n_free; ++cc)
                AtA[r][cc] += c.weight * design[r] * design[cc];
            Atb[r] += c.weight * design[r] * y;
        }
    }

    std::vector<double> phi_free;
    if (!solve_linear(AtA, Atb, phi_free)) return false;
    double sum = 0.0;
    for (int f = 0; f < n_free; ++f) {
        attr.phi[f] = phi_free[f];
        sum += phi_free[f];
    }
    attr.phi[M - 1] = delta - sum;
    return true;
}

}  // namespace

Attribution kernel_shap(const ModelFn& model, const std::vector<double>& x,
                        const std::vector<std::vector<double>>& background,
                        int n_samples, std::uint64_t seed) {
    const int min_samples = 2 * static_cast<int>(x.size()) + 2;
    if (n_samples < min_samples)
        throw std::invalid_argument("kernel_shap: n_samples must be >= " +
                                    std::to_string(min_samples));
    Attribution attr;
    if (kernel_shap_attempt(model, x, background, n_samples, seed, attr)) return attr;
    if (kernel_shap_attempt(model, x, background, 2 * n_samples, seed + 1, attr)) return attr;
    throw std::runtime_error("kernel_shap: regression system singular after retry");
}

std::vector<std::vector<double>> k_medoids(const std::vector<std::vector<double>>& points,
                                           int k, std::uint64_t seed, int iterations) {
    if (points.empty()) throw std::invalid_argument("k_medoids: empty input");
    const int n = static_cast<int>(points.size());
    if (k >= n) return points;

    auto dist2 = [&](int a, int b) {
        double s = 0.0;
        for (std::size_t f = 0; f < points[a].size(); ++f) {
            const double d = points[a][f] - points[b][f];
            s += d * d;
        }
        return s;
    };

    std::mt19937_64 rng(seed);
    std::vector<int> medoids(n);
    std::iota(medoids.begin(), medoids.end(), 0);
    std::shuffle(medoids.begin(), medoids.end(), rng);
    medoids.resize(k);

    std::vector<int> assignment(n, 0);
    for (int it = 0; it < iterations; ++it) {
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = dist2(i, medoids[0]);
            for (int m = 1; m < k; ++m) {
                const double d = dist2(i, medoids[m]);
                if (d < best_d) {
                    best_d = d;
                    best = m;
                }
            }
            assignment[i] = best;
        }
        bool changed = false;
        for (int m = 0; m < k; ++m) {
            std::vector<int> cluster;
            for (int i = 0; i < n; ++i)
                if (assignment[i] == m) cluster.push_back(i);
            if (cluster.empty()) continue;
            int best = cluster[0];
            double best_cost = -1.0;
            for (int cand : cluster) {
                double cost = 0.0;
                for (int other : cluster) cost += std::sqrt(dist2(cand, other));
                if (best_cost < 0.0 || cost < best_cost) {
                    best_cost = cost;
                    best = cand;
                }
            }
            if (medoids[m] != best) {
                medoids[m] = best;
                changed = true;
            }
        }
        if (!changed) break;
    }
    std::sort(medoids.begin(), medoids.end());
    std::vector<std::vector<double>> out;
    for (int m : medoids) out.push_back(points[m]);
    return out;
}

SummaryTable summarize(const std::vector<Attribution>& attributions) {
    if (attributions.empty()) throw std::invalid_argument("summarize: no attributions");
    const std::size_t d = attributions[0].phi.size();
    SummaryTable table;
    table.mean_abs_phi.assign(d, 0.0);
    std::map<int, int> class_counts;
    for (const auto& a : attributions) {
        if (a.phi.size() != d) throw std::invalid_argument("summarize: schema mismatch");
        for (std::size_t f = 0; f < d; ++f) table.mean_abs_phi[f] += std::abs(a.phi[f]);
        auto& abs_acc = table.per_class[a.predicted_class];
        auto& mean_acc = table.per_class_mean[a.predicted_class];
        if (abs_acc.empty()) {
            abs_acc.assign(d, 0.0);
            mean_acc.assign(d, 0.0);
        }
        for (std::size_t f = 0; f < d; ++f) {
            abs_acc[f] += std::abs(a.phi[f]);
            mean_acc[f] += a.phi[f];
        }
        ++class_counts[a.predicted_class];
    }
    for (double& v : table.mean_abs_phi) v /= static_cast<double>(attributions.size());
    for (auto& [cls, vec] : table.per_class)
        for (double& v : vec) v /= static_cast<double>(class_counts[cls]);
    for (auto& [cls, vec] : table.per_class_mean)
        for (double& v : vec) v /= static_cast<double>(class_counts[cls]);

    table.ranking.resize(d);
    std::iota(table.ranking.begin(), table.ranking.end(), 0);
    std::stable_sort(table.ranking.begin(), table.ranking.end(), [&](int a, int b) {
        return table.mean_abs_phi[a] > table.mean_abs_phi[b];
    });
    return table;
}

}  // namespace lma
