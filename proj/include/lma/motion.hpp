#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lma/skeleton.hpp"
#include "lma/vec3.hpp"

namespace lma {

/// One 3D position per skeleton joint, in joint order. Camera space, meters.
using Frame = std::vector<Vec3>;

struct MotionSequence {
    Skeleton skeleton;
    double fps = 0.0;
    std::vector<Frame> frames;
    std::optional<std::string> label;
    std::optional<std::string> performer_id;
    std::string id;  // source identifier (file stem or synth name)

    /// Throws std::invalid_argument on any broken invariant (fps <= 0,
    /// < 2 frames, frame size mismatch, non-finite coordinate).
    void validate() const;
};

/// Sliding-window parameters. `sub_window` is the short horizon w used by the
/// initiation and Effort-Space descriptors.
struct WindowSpec {
    int length_frames = 25;
    int stride_frames = 1;
    int sub_window = 5;

    void validate() const;
};

/// Per-frame, per-joint finite-difference derivatives of position.
struct Kinematics {
    std::vector<std::vector<Vec3>> velocity;      // [frame][joint], m/s
    std::vector<std::vector<Vec3>> acceleration;  // m/s^2
    std::vector<std::vector<Vec3>> jerk;          // m/s^3
};

/// A materialized window: a slice of frames with the matching kinematics
/// slice plus everything feature extraction needs from the parent sequence.
struct Window {
    std::vector<Frame> frames;
    Kinematics kin;
    double fps = 0.0;
    int sub_window = 1;
    std::optional<std::string> label;
    std::string sequence_id;
    int start_frame = 0;
    /// Std of per-frame tracked-joint speeds over the whole parent sequence;
    /// operand of the data-driven initiation threshold.
    double parent_speed_std = 0.0;

    int length() const { return static_cast<int>(frames.size()); }
};

/// Velocity/acceleration/jerk by central differences on interior frames and
/// one-sided differences at the boundaries, dt = 1/fps.
Kinematics derive_kinematics(const MotionSequence& seq);

/// Std (population) of per-frame tracked-joint speed magnitudes over the
/// whole sequence. Baseline for the movement-initiation threshold.
double sequence_speed_std(const MotionSequence& seq, const Kinematics& kin);

/// Windows starting at 0, stride apart: floor((N - length)/stride) + 1 of
/// them. Returns an empty list when the sequence is shorter than one window.
std::vector<Window> make_windows(const MotionSequence& seq, const WindowSpec& spec);

}  // namespace lma
