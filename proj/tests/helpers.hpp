#pragma once

// Shared fixture builders for the test suites.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lma/motion.hpp"
#include "lma/skeleton.hpp"
#include "lma/synth.hpp"

namespace testutil {

/// A static, non-degenerate full-body pose: every joint at a distinct point.
inline lma::Frame base_pose(const lma::Skeleton& skeleton) {
    lma::Frame frame(skeleton.size());
    auto set = [&](const char* j, double x, double y, double z) {
        frame[skeleton.index_of(j)] = lma::Vec3(x, y, z);
    };
    set("pelvis", 0, 1.0, 0);
    set("chest", 0, 1.35, 0);
    set("neck", 0, 1.55, 0);
    set("head", 0, 1.72, 0);
    set("clavicle_l", -0.08, 1.5, 0);
    set("clavicle_r", 0.08, 1.5, 0);
    set("shoulder_l", -0.20, 1.48, 0);
    set("shoulder_r", 0.20, 1.48, 0);
    set("elbow_l", -0.30, 1.20, 0.02);
    set("elbow_r", 0.30, 1.20, 0.02);
    set("hand_l", -0.35, 0.95, 0.08);
    set("hand_r", 0.35, 0.95, 0.08);
    set("hip_l", -0.12, 0.95, 0);
    set("hip_r", 0.12, 0.95, 0);
    set("knee_l", -0.13, 0.55, 0.03);
    set("knee_r", 0.13, 0.55, 0.03);
    set("ankle_l", -0.13, 0.10, 0);
    set("ankle_r", 0.13, 0.10, 0);
    set("foot_l", -0.13, 0.04, 0.10);
    set("foot_r", 0.13, 0.04, 0.10);
    set("toe_l", -0.13, 0.02, 0.18);
    set("toe_r", 0.13, 0.02, 0.18);
    return frame;
}

/// Sequence where frame t = base pose translated by `offset(t)`.
inline lma::MotionSequence translating_sequence(
    int n_frames, double fps, const std::function<lma::Vec3(int)>& offset,
    const std::string& id = "seq") {
    lma::MotionSequence seq;
    seq.skeleton = lma::default_skeleton();
    seq.fps = fps;
    seq.id = id;
    const auto pose = base_pose(seq.skeleton);
    for (int t = 0; t < n_frames; ++t) {
        lma::Frame f = pose;
        for (auto& p : f) p += offset(t);
        seq.frames.push_back(std::move(f));
    }
    return seq;
}

inline lma::MotionSequence stationary_sequence(int n_frames, double fps) {
    return translating_sequence(n_frames, fps, [](int) { return lma::Vec3(); });
}

/// Window over a whole sequence, with kinematics and parent stats attached.
inline lma::Window window_of(const lma::MotionSequence& seq, int sub_window = 5) {
    lma::WindowSpec spec;
    spec.length_frames = static_cast<int>(seq.frames.size());
    spec.stride_frames = 1;
    spec.sub_window = sub_window;
    auto windows = lma::make_windows(seq, spec);
    return windows.at(0);
}

/// Deterministic Gaussian blobs: `per_class` points per class around distinct
/// centers, spread sigma.
inline void gaussian_blobs(int n_classes, int per_class, double sigma,
                           std::uint64_t seed, std::vector<std::vector<double>>& X,
                           std::vector<int>& y, int n_features = 2) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    X.clear();
    y.clear();
    for (int c = 0; c < n_classes; ++c)
        for (int i = 0; i < per_class; ++i) {
            std::vector<double> row(n_features);
            for (int f = 0; f < n_features; ++f)
                row[f] = (f == c % n_features ? 3.0 * (1 + c / n_features) : 0.0) + noise(rng);
            X.push_back(std::move(row));
            y.push_back(c);
        }
}

/// Two classes distinguishable only by arm coordination (in-phase vs
/// anti-phase), with a ~40-frame oscillation period: the class signal needs a
/// window long enough to see a good part of one cycle.
inline std::vector<lma::MotionSequence> phase_fixture(int sequences_per_class,
                                                      int frames_per_sequence,
                                                      std::uint64_t seed) {
    lma::SynthConfig cfg;
    lma::SynthClass in_phase{"sync", 0.8, 0.625, 0.012, 0.5, 0.0};
    lma::SynthClass anti_phase{"alt", 0.8, 0.625, 0.012, 0.5, 3.14159265358979323846};
    cfg.classes = {in_phase, anti_phase};
    cfg.sequences_per_class = sequences_per_class;
    cfg.frames_per_sequence = frames_per_sequence;
    cfg.fps = 25.0;
    cfg.seed = seed;
    return lma::generate(cfg);
}

}  // namespace testutil
