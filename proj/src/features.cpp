#include "lma/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lma/geometry.hpp"

namespace lma {

namespace {

constexpr std::array<std::pair<const char*, const char*>, 8> kDistancePairs = {{
    {"hand_l", "hand_r"},
    {"hand_l", "pelvis"},
    {"hand_r", "pelvis"},
    {"shoulder_l", "shoulder_r"},
    {"knee_l", "knee_r"},
    {"ankle_l", "ankle_r"},
    {"ankle_l", "pelvis"},
    {"ankle_r", "pelvis"},
}};

// name, (a, vertex, c)
constexpr std::array<std::array<const char*, 4>, 6> kAngles = {{
    {"elbow_l", "shoulder_l", "elbow_l", "hand_l"},
    {"elbow_r", "shoulder_r", "elbow_r", "hand_r"},
    {"knee_l", "hip_l", "knee_l", "ankle_l"},
    {"knee_r", "hip_r", "knee_r", "ankle_r"},
    {"shoulder_l", "chest", "shoulder_l", "elbow_l"},
    {"shoulder_r", "chest", "shoulder_r", "elbow_r"},
}};

constexpr std::array<const char*, 6> kTrackedOrder = {
    "hand_l", "hand_r", "foot_l", "foot_r", "head", "pelvis",
};

const std::set<std::string> kUpperBody = {
    "neck",    "head",       "clavicle_l", "clavicle_r", "shoulder_l",
    "shoulder_r", "elbow_l", "elbow_r",    "hand_l",     "hand_r",
};
const std::set<std::string> kLowerBody = {
    "hip_l",   "hip_r",  "knee_l", "knee_r", "ankle_l",
    "ankle_r", "foot_l", "foot_r", "toe_l",  "toe_r",
};

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    if (*std::min_element(v.begin(), v.end()) == *std::max_element(v.begin(), v.end()))
        return 0.0;  // exact for constant series
    double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

int require_joint(const Skeleton& skeleton, const std::string& joint) {
    int idx = skeleton.index_of(joint);
    if (idx < 0) throw std::invalid_argument("unknown joint '" + joint + "'");
    return idx;
}

}  // namespace

std::string to_string(FeatureGroup g) {
    switch (g) {
        case FeatureGroup::Body: return "Body";
        case FeatureGroup::EffortSpace: return "EffortSpace";
        case FeatureGroup::EffortWeight: return "EffortWeight";
        case FeatureGroup::EffortTime: return "EffortTime";
        case FeatureGroup::EffortFlow: return "EffortFlow";
        case FeatureGroup::Shape: return "Shape";
        case FeatureGroup::Space: return "Space";
    }
    return "?";
}

int FeatureSchema::index_of(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

std::uint64_t FeatureSchema::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& name : names) {
        for (char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        h ^= 0x1f;
        h *= 1099511628211ull;
    }
    return h;
}

void FeatureSchema::validate() const {
    if (names.size() != 54)
        throw std::logic_error("feature schema must have 54 names, has " +
                               std::to_string(names.size()));
    std::set<std::string> seen(names.begin(), names.end());
    if (seen.size() != names.size()) throw std::logic_error("duplicate feature names");
    for (const auto& n : names)
        if (!groups.count(n)) throw std::logic_error("feature '" + n + "' has no group");
}

std::shared_ptr<const FeatureSchema> default_schema() {
    static const std::shared_ptr<const FeatureSchema> schema = [] {
        auto s = std::make_shared<FeatureSchema>();
        auto add = [&s](const std::string& name, FeatureGroup g) {
            s->names.push_back(name);
            s->groups[name] = g;
        };
        for (const auto& [a, b] : kDistancePairs)
            add(std::string("body_dist_mean_") + a + "_" + b, FeatureGroup::Body);
        for (const auto& [a, b] : kDistancePairs)
            add(std::string("body_dist_std_") + a + "_" + b, FeatureGroup::Body);
        for (const auto& ang : kAngles)
            add(std::string("body_angle_mean_") + ang[0], FeatureGroup::Body);
        for (const auto* j : kTrackedOrder)
            add(std::string("body_initiation_") + j, FeatureGroup::Body);
        add("effort_space_total", FeatureGroup::EffortSpace);
        for (const auto* j : kTrackedOrder)
            add(std::string("effort_space_") + j, FeatureGroup::EffortSpace);
        add("effort_weight_mean", FeatureGroup::EffortWeight);
        add("effort_weight_max", FeatureGroup::EffortWeight);
        add("effort_time_total", FeatureGroup::EffortTime);
        add("effort_flow_total", FeatureGroup::EffortFlow);
        for (const auto* j : kTrackedOrder)
            add(std::string("effort_flow_") + j, FeatureGroup::EffortFlow);
        add("shape_volume_mean", FeatureGroup::Shape);
        add("shape_volume_std", FeatureGroup::Shape);
        add("shape_volume_min", FeatureGroup::Shape);
        add("shape_volume_max", FeatureGroup::Shape);
        add("shape_volume_rate_mean", FeatureGroup::Shape);
        add("space_path_length", FeatureGroup::Space);
        add("space_curvature_mean", FeatureGroup::Space);
        add("space_dispersion_mean", FeatureGroup::Space);
        add("space_dispersion_std", FeatureGroup::Space);
        s->validate();
        return s;
    }();
    return schema;
}

double movement_initiation(const Window& window, const Skeleton& skeleton,
                           const std::string& joint, const ThresholdPolicy& policy) {
    const int j = require_joint(skeleton, joint);
    const int w = window.sub_window;
    const int len = window.length();
    if (len <= w) return 0.0;
    const double tau = policy.multiplier * window.parent_speed_std;
    const double dt = static_cast<double>(w) / window.fps;

    int hits = 0;
    for (int t = 0; t + w < len; ++t) {
        double rate = (window.frames[t + w][j] - window.frames[t][j]).norm() / dt;
        if (rate > tau) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(len - w);
}

double effort_space(const Window& window, const Skeleton& skeleton,
                    const std::string& joint, double cap) {
    const int j = require_joint(skeleton, joint);
    const int w = window.sub_window;
    const int last = window.length() - 1;

    double path = 0.0;
    int t = 0;
    while (t + w <= last) {
        path += (window.frames[t + w][j] - window.frames[t][j]).norm();
        t += w;
    }
    if (t < last) path += (window.frames[last][j] - window.frames[t][j]).norm();

    const double net = (window.frames[last][j] - window.frames[0][j]).norm();
    if (net < 1e-6) return cap;
    return path / net;
}

double effort_space_total(const Window& window, const Skeleton& skeleton, double cap) {
    double total = 0.0;
    for (const auto& joint : skeleton.tracked)
        total += skeleton.weight(joint) * effort_space(window, skeleton, joint, cap);
    return total;
}

std::vector<double> effort_weight(const Window& window, const Skeleton& skeleton) {
    std::vector<int> idx;
    std::vector<double> alpha;
    for (const auto& joint : skeleton.tracked) {
        idx.push_back(require_joint(skeleton, joint));
        alpha.push_back(skeleton.weight(joint));
    }
    std::vector<double> energy(window.length(), 0.0);
    for (int t = 0; t < window.length(); ++t)
        for (std::size_t k = 0; k < idx.size(); ++k)
            energy[t] += 0.5 * alpha[k] * window.kin.velocity[t][idx[k]].norm2();
    return energy;
}

double effort_time(const Window& window, const Skeleton& skeleton) {
    double total = 0.0;
    for (const auto& joint : skeleton.tracked) {
        const int j = require_joint(skeleton, joint);
        double acc = 0.0;
        for (int t = 0; t < window.length(); ++t)
            acc += window.kin.acceleration[t][j].norm();
        total += skeleton.weight(joint) * acc / static_cast<double>(window.length());
    }
    return total;
}

double effort_flow_jerk(const Window& window, const Skeleton& skeleton,
                        const std::string& joint) {
    const int j = require_joint(skeleton, joint);
    double sum = 0.0;
    for (int t = 0; t < window.length(); ++t) sum += window.kin.jerk[t][j].norm();
    return sum / static_cast<double>(window.length());
}

std::vector<double> shape_volume_series(const Window& window) {
    std::vector<double> vols;
    vols.reserve(window.frames.size());
    for (const auto& frame : window.frames)
        vols.push_back(frame.size() >= 4 ? geom::convex_hull_volume(frame) : 0.0);
    return vols;
}

SpaceFeatures space_features(const Window& window, const Skeleton& skeleton) {
    const int pelvis = require_joint(skeleton, "pelvis");
    const int chest = require_joint(skeleton, "chest");

    SpaceFeatures out;
    std::vector<Vec3> pelvis_traj;
    pelvis_traj.reserve(window.frames.size());
    for (const auto& frame : window.frames) pelvis_traj.push_back(frame[pelvis]);
    for (std::size_t t = 1; t < pelvis_traj.size(); ++t)
        out.path_length += (pelvis_traj[t] - pelvis_traj[t - 1]).norm();
    if (pelvis_traj.size() >= 3)
        out.curvature_mean = mean(geom::curvature(pelvis_traj, 1.0 / window.fps));

    std::vector<int> upper, lower;
    for (std::size_t j = 0; j < skeleton.size(); ++j) {
        if (kUpperBody.count(skeleton.joints[j])) upper.push_back(static_cast<int>(j));
        if (kLowerBody.count(skeleton.joints[j])) lower.push_back(static_cast<int>(j));
    }
    std::vector<double> dispersion;
    dispersion.reserve(window.frames.size());
    for (const auto& frame : window.frames) {
        double du = 0.0, dl = 0.0;
        for (int j : upper) du += (frame[j] - frame[chest]).norm();
        for (int j : lower) dl += (frame[j] - frame[pelvis]).norm();
        if (!upper.empty()) du /= static_cast<double>(upper.size());
        if (!lower.empty()) dl /= static_cast<double>(lower.size());
        dispersion.push_back(du + dl);
    }
    out.dispersion_mean = mean(dispersion);
    out.dispersion_std = stddev(dispersion);
    return out;
}

FeatureVector extract_features(const Window& window, const Skeleton& skeleton,
                               const ThresholdPolicy& policy) {
    FeatureVector fv;
    fv.schema = default_schema();
    fv.label = window.label;
    fv.sequence_id = window.sequence_id;
    fv.start_frame = window.start_frame;
    fv.values.reserve(fv.schema->size());

    // Body: pairwise distance mean/std
    std::vector<std::vector<double>> dists(kDistancePairs.size());
    for (std::size_t p = 0; p < kDistancePairs.size(); ++p) {
        const int a = require_joint(skeleton, kDistancePairs[p].first);
        const int b = require_joint(skeleton, kDistancePairs[p].second);
        for (const auto& frame : window.frames)
            dists[p].push_back(geom::distance(frame[a], frame[b]));
    }
    for (const auto& d : dists) fv.values.push_back(mean(d));
    for (const auto& d : dists) fv.values.push_back(stddev(d));

    // Body: joint angles (degenerate limbs contribute 0)
    for (const auto& ang : kAngles) {
        const int a = require_joint(skeleton, ang[1]);
        const int v = require_joint(skeleton, ang[2]);
        const int c = require_joint(skeleton, ang[3]);
        std::vector<double> angles;
        for (const auto& frame : window.frames)
            angles.push_back(geom::joint_angle(frame[a], frame[v], frame[c]).value_or(0.0));
        fv.values.push_back(mean(angles));
    }

    // Body: movement initiation per tracked joint
    for (const auto* j : kTrackedOrder)
        fv.values.push_back(movement_initiation(window, skeleton, j, policy));

    // Effort Space
    fv.values.push_back(effort_space_total(window, skeleton));
    for (const auto* j : kTrackedOrder)
        fv.values.push_back(effort_space(window, skeleton, j));

    // Effort Weight
    const auto energy = effort_weight(window, skeleton);
    fv.values.push_back(mean(energy));
    fv.values.push_back(energy.empty() ? 0.0 : *std::max_element(energy.begin(), energy.end()));

    // Effort Time
    fv.values.push_back(effort_time(window, skeleton));

    // Effort Flow
    double flow_total = 0.0;
    std::vector<double> flows;
    for (const auto& joint : skeleton.tracked)
        flow_total += skeleton.weight(joint) * effort_flow_jerk(window, skeleton, joint);
    fv.values.push_back(flow_total);
    for (const auto* j : kTrackedOrder)
        fv.values.push_back(effort_flow_jerk(window, skeleton, j));

    // Shape
    const auto vols = shape_volume_series(window);
    fv.values.push_back(mean(vols));
    fv.values.push_back(stddev(vols));
    fv.values.push_back(vols.empty() ? 0.0 : *std::min_element(vols.begin(), vols.end()));
    fv.values.push_back(vols.empty() ? 0.0 : *std::max_element(vols.begin(), vols.end()));
    double rate = 0.0;
    for (std::size_t t = 1; t < vols.size(); ++t)
        rate += std::abs(vols[t] - vols[t - 1]) * window.fps;
    fv.values.push_back(vols.size() > 1 ? rate / static_cast<double>(vols.size() - 1) : 0.0);

    // Space
    const auto sp = space_features(window, skeleton);
    fv.values.push_back(sp.path_length);
    fv.values.push_back(sp.curvature_mean);
    fv.values.push_back(sp.dispersion_mean);
    fv.values.push_back(sp.dispersion_std);

    if (fv.values.size() != fv.schema->size())
        throw std::logic_error("feature vector length mismatch");
    for (std::size_t i = 0; i < fv.values.size(); ++i)
        if (!std::isfinite(fv.values[i]))
            throw std::runtime_error("non-finite feature '" + fv.schema->names[i] +
                                     "' for window of '" + window.sequence_id + "'");
    return fv;
}

}  // namespace lma
