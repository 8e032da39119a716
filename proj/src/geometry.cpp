#include "lma/geometry.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

namespace lma {
namespace geom {

double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

std::optional<double> joint_angle(const Vec3& a, const Vec3& vertex, const Vec3& c) {
    constexpr double kLimbTol = 1e-9;
    const Vec3 u = a - vertex;
    const Vec3 v = c - vertex;
    const double nu = u.norm(), nv = v.norm();
    if (nu < kLimbTol || nv < kLimbTol) return std::nullopt;
    double cosang = u.dot(v) / (nu * nv);
    cosang = std::clamp(cosang, -1.0, 1.0);
    return std::acos(cosang);
}

namespace {

constexpr double kPlaneTol = 1e-9;  // face classification tolerance, meters

struct Face {
    int a, b, c;
    Vec3 normal;  // outward, not normalized
};

Vec3 face_normal(const std::vector<Vec3>& p, int a, int b, int c) {
    return (p[b] - p[a]).cross(p[c] - p[a]);
}

// Initial non-degenerate tetrahedron, or empty if all points are coplanar.
std::vector<int> initial_tetrahedron(const std::vector<Vec3>& p) {
    const int n = static_cast<int>(p.size());
    // two farthest-apart extreme points
    int i0 = 0, i1 = 1;
    double best = -1.0;
    for (int axis = 0; axis < 3; ++axis) {
        int lo = 0, hi = 0;
        auto coord = [axis](const Vec3& v) { return axis == 0 ? v.x : axis == 1 ? v.y : v.z; };
        for (int i = 1; i < n; ++i) {
            if (coord(p[i]) < coord(p[lo])) lo = i;
            if (coord(p[i]) > coord(p[hi])) hi = i;
        }
        double d = (p[hi] - p[lo]).norm2();
        if (d > best) { best = d; i0 = lo; i1 = hi; }
    }
    if (best < kPlaneTol * kPlaneTol) return {};
    // third point: farthest from the line i0-i1
    const Vec3 dir = p[i1] - p[i0];
    int i2 = -1;
    best = kPlaneTol * kPlaneTol * dir.norm2();
    for (int i = 0; i < n; ++i) {
        double d = dir.cross(p[i] - p[i0]).norm2();
        if (d > best) { best = d; i2 = i; }
    }
    if (i2 < 0) return {};
    // fourth point: farthest from the plane i0-i1-i2
    const Vec3 nrm = face_normal(p, i0, i1, i2);
    int i3 = -1;
    best = kPlaneTol * nrm.norm();
    for (int i = 0; i < n; ++i) {
        double d = std::abs(nrm.dot(p[i] - p[i0]));
        if (d > best) { best = d; i3 = i; }
    }
    if (i3 < 0) return {};
    return {i0, i1, i2, i3};
}

}  // namespace

double convex_hull_volume(const std::vector<Vec3>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 4) throw std::invalid_argument("convex hull volume needs at least 4 points");
    for (const auto& p : points)
        if (!p.finite()) throw std::invalid_argument("convex hull: non-finite point");

    auto tet = initial_tetrahedron(points);
    if (tet.empty()) return 0.0;  // coplanar or collinear cloud

    const Vec3 inner =
        (points[tet[0]] + points[tet[1]] + points[tet[2]] + points[tet[3]]) / 4.0;

    std::vector<Face> faces;
    auto add_face = [&](int a, int b, int c) {
        Face f{a, b, c, face_normal(points, a, b, c)};
        if (f.normal.dot(inner - points[a]) > 0.0) {  // flip inward-facing
            std::swap(f.b, f.c);
            f.normal = f.normal * -1.0;
        }
        faces.push_back(f);
    };
    add_face(tet[0], tet[1], tet[2]);
    add_face(tet[0], tet[1], tet[3]);
    add_face(tet[0], tet[2], tet[3]);
    add_face(tet[1], tet[2], tet[3]);

    for (int i = 0; i < n; ++i) {
        if (i == tet[0] || i == tet[1] || i == tet[2] || i == tet[3]) continue;
        std::vector<int> visible;
        for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
            double side = faces[f].normal.dot(points[i] - points[faces[f].a]);
            if (side > kPlaneTol * std::max(1.0, faces[f].normal.norm())) visible.push_back(f);
        }
        if (visible.empty()) continue;

        std::set<std::pair<int, int>> vis_edges;
        for (int f : visible) {
            vis_edges.insert({faces[f].a, faces[f].b});
            vis_edges.insert({faces[f].b, faces[f].c});
            vis_edges.insert({faces[f].c, faces[f].a});
        }
        // horizon = directed edges of visible faces whose reverse is hidden
        std::vector<std::pair<int, int>> horizon;
        for (const auto& e : vis_edges)
            if (!vis_edges.count({e.second, e.first})) horizon.push_back(e);

        std::vector<Face> kept;
        kept.reserve(faces.size());
        std::set<int> vis_set(visible.begin(), visible.end());
        for (int f = 0; f < static_cast<int>(faces.size()); ++f)
            if (!vis_set.count(f)) kept.push_back(faces[f]);
        faces = std::move(kept);
        for (const auto& [u, v] : horizon) {
            Face f{u, v, i, face_normal(points, u, v, i)};
            faces.push_back(f);
        }
    }

    // Summing the triple products before the single division keeps integer
    // inputs exact (a unit cube comes out at exactly 1).
    double six_vol = 0.0;
    for (const auto& f : faces)
        six_vol += points[f.a].dot(points[f.b].cross(points[f.c]));
    return six_vol / 6.0;
}

std::vector<double> curvature(const std::vector<Vec3>& samples, double dt) {
    const int n = static_cast<int>(samples.size());
    if (n < 3) throw std::invalid_argument("curvature needs at least 3 samples");
    if (dt <= 0.0) throw std::invalid_argument("curvature: dt must be > 0");
    constexpr double kSpeedGuard = 1e-6;  // m/s

    std::vector<double> kappa(n - 2, 0.0);
    for (int i = 1; i < n - 1; ++i) {
        const Vec3 v = (samples[i + 1] - samples[i - 1]) / (2.0 * dt);
        const Vec3 a = (samples[i + 1] - samples[i] * 2.0 + samples[i - 1]) / (dt * dt);
        const double speed = v.norm();
        if (speed < kSpeedGuard) continue;
        kappa[i - 1] = v.cross(a).norm() / (speed * speed * speed);
    }
    return kappa;
}

}  // namespace geom
}  // namespace lma
