#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lma/motion.hpp"

namespace lma {

struct SynthClass {
    std::string name;
    double amplitude = 1.0;     // limb swing scale
    double tempo_hz = 1.0;      // oscillator frequency
    double jitter = 0.0;        // per-coordinate noise sigma, meters
    double openness = 0.5;      // posture openness in [0,1], scales hull volume
    double arm_phase_offset = 3.14159265358979323846;  // right vs left arm phase
};

struct SynthConfig {
    std::vector<SynthClass> classes;
    int sequences_per_class = 5;
    int frames_per_sequence = 120;
    double fps = 25.0;
    std::uint64_t seed = 42;

    void validate() const;
};

/// The 12 emotion-named classes with amplitude/tempo/openness graded by
/// arousal. A test fixture, not a claim about how emotions look.
SynthConfig default_synth_config();

/// Deterministic oscillator-driven skeleton animation: one sequence per
/// (class, repetition), labels attached, performer id cycling with the
/// repetition index. Per-sequence RNG derives from (seed, class, repetition),
/// so output is bit-identical across runs.
std::vector<MotionSequence> generate(const SynthConfig& config);

}  // namespace lma
