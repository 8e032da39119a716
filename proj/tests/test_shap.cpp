#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "helpers.hpp"
#include "lma/shap.hpp"

using namespace lma;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Matrix X(rows, std::vector<double>(cols));
    for (auto& r : X)
        for (auto& v : r) v = u(rng);
    return X;
}

std::vector<int> threshold_labels(const Matrix& X) {
    std::vector<int> y;
    for (const auto& r : X) y.push_back((r[0] + 0.7 * r[2] - 0.4 * r[4] > 0.0) ? 1 : 0);
    return y;
}

}  // namespace

TEST_CASE("single-leaf tree: zero attributions, base equals the leaf probability") {
    Tree tree;
    tree.n_classes = 2;
    Tree::Node leaf;
    leaf.cover = 10.0;
    leaf.class_counts = {7.0, 3.0};
    tree.nodes.push_back(leaf);

    auto a = tree_shap_single(tree, {1.0, 2.0}, 0);
    CHECK(a.base_value == doctest::Approx(0.7).epsilon(1e-12));
    for (double p : a.phi) CHECK(p == 0.0);
}

TEST_CASE("depth-1 tree attributes only to its split feature") {
    // split on feature 3 at 0.5; left leaf pure class 0, right pure class 1
    Tree tree;
    tree.n_classes = 2;
    tree.nodes.resize(3);
    tree.nodes[0].feature = 3;
    tree.nodes[0].threshold = 0.5;
    tree.nodes[0].left = 1;
    tree.nodes[0].right = 2;
    tree.nodes[0].cover = 10.0;
    tree.nodes[1].cover = 6.0;
    tree.nodes[1].class_counts = {6.0, 0.0};
    tree.nodes[2].cover = 4.0;
    tree.nodes[2].class_counts = {0.0, 4.0};

    std::vector<double> x = {9.0, 9.0, 9.0, 1.0, 9.0};
    auto a = tree_shap_single(tree, x, 1);
    for (std::size_t f = 0; f < x.size(); ++f)
        if (f != 3) CHECK(a.phi[f] == 0.0);
    // base = cover-weighted class-1 expectation = 0.4; output = 1
    CHECK(a.base_value == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(a.phi[3] == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("tree attribution satisfies local accuracy") {
    auto X = random_matrix(300, 8, 5);
    auto y = threshold_labels(X);
    ForestParams params;
    params.n_trees = 20;
    params.max_depth = 6;
    auto forest = train_forest(X, y, 2, params, 11);

    for (int i = 0; i < 50; ++i) {
        auto a = tree_shap(forest, X[i], 1);
        const double out = forest.predict_proba(X[i])[1];
        const double sum = a.base_value + std::accumulate(a.phi.begin(), a.phi.end(), 0.0);
        CHECK(std::abs(sum - out) < 1e-9);
    }
}

TEST_CASE("tree attribution equals brute-force Shapley of the conditional game") {
    auto X = random_matrix(200, 8, 19);
    auto y = threshold_labels(X);
    ForestParams params;
    params.n_trees = 12;
    params.max_depth = 5;
    auto forest = train_forest(X, y, 2, params, 23);

    std::vector<int> all_features(8);
    std::iota(all_features.begin(), all_features.end(), 0);
    for (int i = 0; i < 6; ++i) {
        for (const auto& tree : forest.trees) {
            REQUIRE(tree.active_features().size() <= 10);
            CoalitionValueFn game = [&](const std::vector<bool>& present) {
                return tree_expected_value(tree, X[i], present, 1);
            };
            auto exact = brute_force_shapley(game, 8, all_features);
            auto fast = tree_shap_single(tree, X[i], 1);
            CHECK(std::abs(exact.base_value - fast.base_value) < 1e-9);
            for (int f = 0; f < 8; ++f) CHECK(std::abs(exact.phi[f] - fast.phi[f]) < 1e-9);
        }
    }
}

TEST_CASE("tree attribution handles repeated features along one path") {
    // feature 0 appears twice on the same path
    Tree tree;
    tree.n_classes = 2;
    tree.nodes.resize(5);
    tree.nodes[0] = {0, 0.0, 1, 2, 12.0, {}};
    tree.nodes[1] = {-1, 0.0, -1, -1, 5.0, {5.0, 0.0}};
    tree.nodes[2] = {0, 1.0, 3, 4, 7.0, {}};
    tree.nodes[3] = {-1, 0.0, -1, -1, 3.0, {1.0, 2.0}};
    tree.nodes[4] = {-1, 0.0, -1, -1, 4.0, {0.0, 4.0}};

    std::vector<double> x = {0.5, 0.0};
    CoalitionValueFn game = [&](const std::vector<bool>& present) {
        return tree_expected_value(tree, x, present, 1);
    };
    auto exact = brute_force_shapley(game, 2, {0, 1});
    auto fast = tree_shap_single(tree, x, 1);
    CHECK(std::abs(exact.phi[0] - fast.phi[0]) < 1e-9);
    CHECK(std::abs(exact.phi[1] - fast.phi[1]) < 1e-9);
    CHECK(std::abs(exact.base_value - fast.base_value) < 1e-9);
}

TEST_CASE("brute force: one feature gets the full gap to the background") {
    ModelFn f = [](const std::vector<double>& v) { return 3.0 * v[0] + 1.0; };
    auto game = background_value_fn(f, {2.0}, {{0.5}});
    auto a = brute_force_shapley(game, 1, {0});
    CHECK(a.phi[0] == doctest::Approx(3.0 * (2.0 - 0.5)).epsilon(1e-12));
    CHECK(a.base_value == doctest::Approx(f({0.5})).epsilon(1e-12));
}

TEST_CASE("brute force obeys the symmetry and dummy axioms") {
    ModelFn f = [](const std::vector<double>& v) { return v[0] + v[1]; };
    auto game = background_value_fn(f, {1.5, 1.5, 9.0}, {{0.0, 0.0, 1.0}});
    auto a = brute_force_shapley(game, 3, {0, 1, 2});
    CHECK(a.phi[0] == doctest::Approx(a.phi[1]).epsilon(1e-12));
    CHECK(a.phi[2] == 0.0);  // feature 2 is never read

    CHECK_THROWS_AS(brute_force_shapley(game, 20,
                                        {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}),
                    std::invalid_argument);
}

TEST_CASE("kernel estimator: constant model gets zero attributions") {
    ModelFn f = [](const std::vector<double>&) { return 4.2; };
    auto a = kernel_shap(f, {1, 2, 3, 4}, {{0, 0, 0, 0}}, 256, 3);
    CHECK(a.base_value == doctest::Approx(4.2).epsilon(1e-12));
    for (double p : a.phi) CHECK(std::abs(p) < 1e-9);
}

TEST_CASE("kernel estimator reproduces the linear closed form") {
    const std::vector<double> w = {1.0, -2.0, 0.5, 3.0, 0.0, -1.5};
    ModelFn f = [&](const std::vector<double>& v) {
        double s = 0.25;
        for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * v[i];
        return s;
    };
    const std::vector<double> x = {1, 1, -1, 0.5, 2, -0.5};
    const std::vector<double> z = {0, 0.5, 0, -0.5, 1, 0};
    auto a = kernel_shap(f, x, {z}, 1 << 10, 9);
    for (std::size_t i = 0; i < w.size(); ++i)
        CHECK(a.phi[i] == doctest::Approx(w[i] * (x[i] - z[i])).epsilon(1e-9));
    CHECK(a.base_value == doctest::Approx(f(z)).epsilon(1e-9));
}

TEST_CASE("kernel estimator agrees with brute force on a 10-feature model") {
    ModelFn f = [](const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i % 2 ? -1.0 : 1.0) * v[i];
        return s + 0.8 * v[0] * v[1] - 0.5 * v[2] * v[7] + std::sin(v[4]);
    };
    auto X = random_matrix(9, 10, 31);
    const auto x = X[0];
    const std::vector<std::vector<double>> background(X.begin() + 1, X.end());

    std::vector<int> subset(10);
    std::iota(subset.begin(), subset.end(), 0);
    auto exact = brute_force_shapley(background_value_fn(f, x, background), 10, subset);
    auto est = kernel_shap(f, x, background, 1 << 14, 17);
    for (int i = 0; i < 10; ++i) CHECK(std::abs(est.phi[i] - exact.phi[i]) < 0.05);

    // additivity is enforced by construction
    const double sum = est.base_value + std::accumulate(est.phi.begin(), est.phi.end(), 0.0);
    CHECK(sum == doctest::Approx(f(x)).epsilon(1e-6));
}

TEST_CASE("k-medoids picks a deterministic subset of the data") {
    auto X = random_matrix(120, 4, 77);
    auto med = k_medoids(X, 16, 5);
    REQUIRE(med.size() == 16);
    for (const auto& m : med)
        CHECK(std::find(X.begin(), X.end(), m) != X.end());
    CHECK(k_medoids(X, 16, 5) == med);

    auto few = k_medoids(X, 500, 5);  // k larger than the data collapses to the data
    CHECK(few.size() == X.size());
}

TEST_CASE("summary: ranking sorts by mean absolute attribution") {
    Attribution a;
    a.phi = {0.1, -0.9, 0.3};
    a.predicted_class = 0;
    auto table = summarize({a});
    REQUIRE(table.ranking.size() == 3);
    CHECK(table.ranking[0] == 1);
    CHECK(table.ranking[1] == 2);
    CHECK(table.ranking[2] == 0);
    CHECK(table.mean_abs_phi[1] == doctest::Approx(0.9));
}

TEST_CASE("summary: opposite-sign attributions keep |phi| but cancel the mean") {
    Attribution a, b;
    a.phi = {0.5, -0.2};
    b.phi = {-0.5, 0.2};
    a.predicted_class = b.predicted_class = 0;
    auto table = summarize({a, b});
    CHECK(table.mean_abs_phi[0] == doctest::Approx(0.5));
    CHECK(table.mean_abs_phi[1] == doctest::Approx(0.2));
    CHECK(table.per_class_mean.at(0)[0] == doctest::Approx(0.0));
    CHECK(table.per_class_mean.at(0)[1] == doctest::Approx(0.0));
}

TEST_CASE("summary: a model reading two features ranks exactly those on top") {
    ModelFn f = [](const std::vector<double>& v) { return 2.0 * v[0] - 3.0 * v[5]; };
    auto X = random_matrix(40, 7, 13);
    std::vector<Attribution> attrs;
    for (int i = 0; i < 12; ++i) {
        auto game = background_value_fn(f, X[i], {X[30], X[31]});
        std::vector<int> subset(7);
        std::iota(subset.begin(), subset.end(), 0);
        auto a = brute_force_shapley(game, 7, subset);
        a.predicted_class = 0;
        attrs.push_back(std::move(a));
    }
    auto table = summarize(attrs);
    std::set<int> top = {table.ranking[0], table.ranking[1]};
    CHECK(top == std::set<int>{0, 5});
}
