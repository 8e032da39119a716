#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lma {

/// Named joint hierarchy with per-joint importance weights and the subset of
/// joints used by the Effort descriptors.
struct Skeleton {
    std::vector<std::string> joints;
    std::vector<std::pair<std::string, std::string>> edges;
    std::map<std::string, double> weight_of;
    std::vector<std::string> tracked;

    std::size_t size() const { return joints.size(); }
    int index_of(const std::string& joint) const;  // -1 if unknown
    double weight(const std::string& joint) const;

    /// Throws std::invalid_argument if any structural invariant is broken.
    void validate() const;
};

/// 22-joint full-body skeleton: torso chain plus arms (with clavicles) and
/// legs (with toes). Extremities carry weight 1.0, pelvis 0.5, the rest 0.25.
/// Tracked set: hands, feet, head, pelvis.
Skeleton default_skeleton();

}  // namespace lma
