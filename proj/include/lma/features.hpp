#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lma/motion.hpp"
#include "lma/skeleton.hpp"

namespace lma {

/// Threshold for movement initiation: tau = multiplier * std of per-frame
/// tracked-joint speeds over the whole parent sequence.
struct ThresholdPolicy {
    double multiplier = 1.0;
};

enum class FeatureGroup { Body, EffortSpace, EffortWeight, EffortTime, EffortFlow, Shape, Space };

std::string to_string(FeatureGroup g);

struct FeatureSchema {
    std::vector<std::string> names;
    std::map<std::string, FeatureGroup> groups;

    std::size_t size() const { return names.size(); }
    int index_of(const std::string& name) const;  // -1 if unknown
    std::uint64_t hash() const;                   // FNV-1a over the name list
    void validate() const;                        // 54 unique names, all grouped
};

/// The 54-feature LMA descriptor schema: Body distances/angles/initiation,
/// the four Effort factors, Shape volume statistics and Space features.
std::shared_ptr<const FeatureSchema> default_schema();

struct FeatureVector {
    std::shared_ptr<const FeatureSchema> schema;
    std::vector<double> values;
    std::optional<std::string> label;
    std::string sequence_id;
    int start_frame = 0;
};

/// Fraction of window frames whose sub-window displacement rate of `joint`
/// exceeds the data-driven threshold.
double movement_initiation(const Window& window, const Skeleton& skeleton,
                           const std::string& joint, const ThresholdPolicy& policy);

/// Path/chord ratio of one joint over the window: sub-window hop distances
/// summed (including the trailing partial hop) divided by net displacement.
/// Net displacement below 1e-6 m returns `cap`.
double effort_space(const Window& window, const Skeleton& skeleton,
                    const std::string& joint, double cap = 100.0);

/// Weighted sum of per-joint path ratios over the tracked set.
double effort_space_total(const Window& window, const Skeleton& skeleton, double cap = 100.0);

/// Per-frame kinetic energy of the tracked set: sum of 1/2 * alpha_j * |v_j|^2.
std::vector<double> effort_weight(const Window& window, const Skeleton& skeleton);

/// Weighted sum over the tracked set of each joint's mean |acceleration|.
double effort_time(const Window& window, const Skeleton& skeleton);

/// Mean jerk magnitude of one joint over the window.
double effort_flow_jerk(const Window& window, const Skeleton& skeleton,
                        const std::string& joint);

/// Per-frame convex hull volume of all joints. Degenerate frames record 0.
std::vector<double> shape_volume_series(const Window& window);

struct SpaceFeatures {
    double path_length = 0.0;      // m, pelvis frame-to-frame path
    double curvature_mean = 0.0;   // 1/m, pelvis trajectory
    double dispersion_mean = 0.0;  // m, kinesphere use
    double dispersion_std = 0.0;   // m
};

/// Pelvis path length and curvature plus spatial dispersion: per frame, mean
/// distance of upper-body joints to the chest plus mean distance of
/// lower-body joints to the pelvis.
SpaceFeatures space_features(const Window& window, const Skeleton& skeleton);

/// The full 54-value descriptor. Deterministic: the same window yields a
/// bit-identical vector.
FeatureVector extract_features(const Window& window, const Skeleton& skeleton,
                               const ThresholdPolicy& policy);

}  // namespace lma
