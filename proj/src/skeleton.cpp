#include "lma/skeleton.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace lma {

int Skeleton::index_of(const std::string& joint) const {
    auto it = std::find(joints.begin(), joints.end(), joint);
    if (it == joints.end()) return -1;
    return static_cast<int>(it - joints.begin());
}

double Skeleton::weight(const std::string& joint) const {
    auto it = weight_of.find(joint);
    if (it == weight_of.end())
        throw std::invalid_argument("skeleton: no weight for joint '" + joint + "'");
    return it->second;
}

void Skeleton::validate() const {
    std::set<std::string> seen(joints.begin(), joints.end());
    if (seen.size() != joints.size())
        throw std::invalid_argument("skeleton: duplicate joint names");
    for (const auto& [a, b] : edges) {
        if (!seen.count(a) || !seen.count(b))
            throw std::invalid_argument("skeleton: edge endpoint '" + a + "'-'" + b +
                                        "' not in joint list");
    }
    bool positive_tracked = false;
    for (const auto& j : tracked) {
        if (!seen.count(j))
            throw std::invalid_argument("skeleton: tracked joint '" + j + "' not in joint list");
        if (weight(j) > 0.0) positive_tracked = true;
    }
    for (const auto& [name, w] : weight_of) {
        if (w < 0.0)
            throw std::invalid_argument("skeleton: negative weight for joint '" + name + "'");
    }
    if (!tracked.empty() && !positive_tracked)
        throw std::invalid_argument("skeleton: all tracked joints have zero weight");
}

Skeleton default_skeleton() {
    Skeleton s;
    s.joints = {
        "pelvis",     "chest",      "neck",    "head",
        "clavicle_l", "shoulder_l", "elbow_l", "hand_l",
        "clavicle_r", "shoulder_r", "elbow_r", "hand_r",
        "hip_l",      "knee_l",     "ankle_l", "foot_l", "toe_l",
        "hip_r",      "knee_r",     "ankle_r", "foot_r", "toe_r",
    };
    s.edges = {
        {"pelvis", "chest"},     {"chest", "neck"},      {"neck", "head"},
        {"chest", "clavicle_l"}, {"clavicle_l", "shoulder_l"},
        {"shoulder_l", "elbow_l"}, {"elbow_l", "hand_l"},
        {"chest", "clavicle_r"}, {"clavicle_r", "shoulder_r"},
        {"shoulder_r", "elbow_r"}, {"elbow_r", "hand_r"},
        {"pelvis", "hip_l"},     {"hip_l", "knee_l"},    {"knee_l", "ankle_l"},
        {"ankle_l", "foot_l"},   {"foot_l", "toe_l"},
        {"pelvis", "hip_r"},     {"hip_r", "knee_r"},    {"knee_r", "ankle_r"},
        {"ankle_r", "foot_r"},   {"foot_r", "toe_r"},
    };
    for (const auto& j : s.joints) s.weight_of[j] = 0.25;
    for (const auto& j : {"hand_l", "hand_r", "foot_l", "foot_r", "head"})
        s.weight_of[j] = 1.0;
    s.weight_of["pelvis"] = 0.5;
    s.tracked = {"hand_l", "hand_r", "foot_l", "foot_r", "head", "pelvis"};
    s.validate();
    return s;
}

}  // namespace lma
