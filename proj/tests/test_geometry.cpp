#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lma/geometry.hpp"

using namespace lma;
using namespace lma::geom;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<Vec3> unit_cube() {
    std::vector<Vec3> pts;
    for (int i = 0; i < 8; ++i)
        pts.emplace_back(i & 1 ? 1.0 : 0.0, i & 2 ? 1.0 : 0.0, i & 4 ? 1.0 : 0.0);
    return pts;
}

Vec3 rotate_z(const Vec3& p, double a) {
    return {p.x * std::cos(a) - p.y * std::sin(a), p.x * std::sin(a) + p.y * std::cos(a),
            p.z};
}

/// Half-space representation of the hull by brute force: every plane through
/// three points that has all points on one side. Independent of the
/// incremental hull implementation.
std::vector<std::pair<Vec3, double>> brute_force_facets(const std::vector<Vec3>& pts) {
    std::vector<std::pair<Vec3, double>> planes;  // n . p <= d
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                Vec3 nrm = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
                if (nrm.norm() < 1e-12) continue;
                double lo = 0.0, hi = 0.0;
                for (const auto& p : pts) {
                    double s = nrm.dot(p - pts[i]);
                    lo = std::min(lo, s);
                    hi = std::max(hi, s);
                }
                const double eps = 1e-9 * nrm.norm();
                if (hi <= eps)
                    planes.emplace_back(nrm, nrm.dot(pts[i]));
                else if (lo >= -eps)
                    planes.emplace_back(nrm * -1.0, -nrm.dot(pts[i]));
            }
    return planes;
}

}  // namespace

TEST_CASE("distance basics") {
    CHECK(distance({0, 0, 0}, {0, 0, 0}) == 0.0);
    CHECK(distance({1, 0, 0}, {0, 0, 0}) == 1.0);
    CHECK(distance({1, 2, 2}, {0, 0, 0}) == 3.0);
}

TEST_CASE("joint angle basics and clamp guard") {
    auto right = joint_angle({1, 0, 0}, {0, 0, 0}, {0, 1, 0});
    REQUIRE(right.has_value());
    CHECK(*right == doctest::Approx(kPi / 2).epsilon(1e-12));

    auto straight = joint_angle({1, 0, 0}, {0, 0, 0}, {2, 0, 0});
    REQUIRE(straight.has_value());
    CHECK(*straight == doctest::Approx(0.0));

    auto folded = joint_angle({1, 0, 0}, {0, 0, 0}, {-1, 1e-12, 0});
    REQUIRE(folded.has_value());
    CHECK(std::abs(*folded - kPi) < 1e-6);

    CHECK_FALSE(joint_angle({0, 0, 0}, {0, 0, 0}, {1, 0, 0}).has_value());
}

TEST_CASE("unit cube hull volume is exactly 1") {
    CHECK(convex_hull_volume(unit_cube()) == 1.0);
}

TEST_CASE("regular tetrahedron volume matches the closed form") {
    // edge length 1: vertices of alternating cube corners scaled by 1/sqrt(2)
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<Vec3> tet = {{0, 0, 0},
                             {s, s, 0},
                             {s, 0, s},
                             {0, s, s}};
    CHECK(std::abs(convex_hull_volume(tet) - 1.0 / (6.0 * std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("interior points do not change the hull volume") {
    auto pts = unit_cube();
    pts.emplace_back(0.5, 0.5, 0.5);
    pts.emplace_back(0.25, 0.75, 0.1);
    CHECK(convex_hull_volume(pts) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("degenerate point clouds have zero volume, tiny clouds throw") {
    CHECK(convex_hull_volume({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}) == 0.0);
    CHECK(convex_hull_volume({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}}) == 0.0);
    CHECK_THROWS_AS(convex_hull_volume({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}),
                    std::invalid_argument);
}

TEST_CASE("hull volume is invariant under rigid motion and scales cubically") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec3> pts;
    for (int i = 0; i < 60; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
    const double vol = convex_hull_volume(pts);
    REQUIRE(vol > 0.0);

    std::vector<Vec3> moved, scaled;
    for (const auto& p : pts) {
        moved.push_back(rotate_z(p, 0.83) + Vec3(5.0, -2.0, 11.0));
        scaled.push_back(p * 2.0);
    }
    CHECK(std::abs(convex_hull_volume(moved) - vol) / vol < 1e-9);
    CHECK(convex_hull_volume(scaled) == doctest::Approx(8.0 * vol).epsilon(1e-9));
}

TEST_CASE("random ball hull volume matches a Monte-Carlo membership estimate") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec3> pts;
    while (pts.size() < 200) {
        Vec3 p(u(rng), u(rng), u(rng));
        if (p.norm() <= 1.0) pts.push_back(p);
    }
    const double vol = convex_hull_volume(pts);

    const auto planes = brute_force_facets(pts);
    REQUIRE_FALSE(planes.empty());
    const int samples = 400000;
    int inside = 0;
    for (int i = 0; i < samples; ++i) {
        Vec3 p(u(rng), u(rng), u(rng));
        bool in = true;
        for (const auto& [nrm, d] : planes)
            if (nrm.dot(p) > d + 1e-9 * nrm.norm()) {
                in = false;
                break;
            }
        inside += in;
    }
    const double estimate = 8.0 * inside / samples;  // box volume times hit rate
    CHECK(std::abs(vol - estimate) / vol < 0.01);
}

TEST_CASE("circle curvature approximates 1/r") {
    const double r = 2.0;
    const int per_turn = 100;
    std::vector<Vec3> circle;
    for (int i = 0; i < 2 * per_turn; ++i) {
        const double a = 2.0 * kPi * i / per_turn;
        circle.emplace_back(r * std::cos(a), r * std::sin(a), 0.0);
    }
    for (double k : curvature(circle, 0.01)) CHECK(std::abs(k - 0.5) < 1e-3);
}

TEST_CASE("line and stationary trajectories have zero curvature") {
    std::vector<Vec3> line, still;
    for (int i = 0; i < 50; ++i) {
        line.emplace_back(0.3 * i, 0.1 * i, 0.0);
        still.emplace_back(1.0, 2.0, 3.0);
    }
    for (double k : curvature(line, 0.1)) CHECK(k == doctest::Approx(0.0));
    for (double k : curvature(still, 0.1)) CHECK(k == 0.0);

    CHECK_THROWS_AS(curvature({{0, 0, 0}, {1, 0, 0}}, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(curvature(line, 0.0), std::invalid_argument);
}
