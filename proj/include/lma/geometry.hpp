#pragma once

#include <optional>
#include <vector>

#include "lma/vec3.hpp"

namespace lma {
namespace geom {

/// Euclidean distance, meters.
double distance(const Vec3& a, const Vec3& b);

/// Angle at `vertex` between (a - vertex) and (c - vertex), radians in [0, pi].
/// Empty when either limb is shorter than 1e-9 m; callers substitute 0 and
/// flag the window.
std::optional<double> joint_angle(const Vec3& a, const Vec3& vertex, const Vec3& c);

/// Volume of the 3D convex hull. Coplanar or collinear clouds yield 0.
/// Throws std::invalid_argument for fewer than 4 points.
double convex_hull_volume(const std::vector<Vec3>& points);

/// Discrete curvature |v x a| / |v|^3 per interior sample, finite-difference
/// v and a, dt seconds per sample. Samples slower than 1e-6 m/s yield 0.
/// Throws std::invalid_argument for fewer than 3 samples or dt <= 0.
std::vector<double> curvature(const std::vector<Vec3>& samples, double dt);

}  // namespace geom
}  // namespace lma
