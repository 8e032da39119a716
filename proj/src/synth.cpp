#include "lma/synth.hpp"

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "lma/forest.hpp"  // mix_seed

namespace lma {

void SynthConfig::validate() const {
    if (classes.empty()) throw std::invalid_argument("synth: no classes");
    if (sequences_per_class < 1) throw std::invalid_argument("synth: counts must be >= 1");
    if (frames_per_sequence < 2) throw std::invalid_argument("synth: needs >= 2 frames");
    if (fps <= 0.0) throw std::invalid_argument("synth: fps must be > 0");
    for (const auto& c : classes) {
        if (c.name.empty()) throw std::invalid_argument("synth: unnamed class");
        if (c.openness < 0.0 || c.openness > 1.0)
            throw std::invalid_argument("synth: openness must be in [0,1]");
    }
}

SynthConfig default_synth_config() {
    SynthConfig cfg;
    cfg.classes = {
        {"afraid", 0.90, 2.2, 0.020, 0.25},
        {"angry", 1.20, 2.6, 0.020, 0.55},
        {"annoyed", 0.70, 1.8, 0.015, 0.40},
        {"bored", 0.25, 0.6, 0.010, 0.30},
        {"excited", 1.10, 3.0, 0.020, 0.85},
        {"happy", 0.90, 2.0, 0.015, 0.75},
        {"miserable", 0.35, 0.8, 0.015, 0.15},
        {"pleased", 0.60, 1.4, 0.010, 0.60},
        {"relaxed", 0.40, 0.9, 0.010, 0.50},
        {"sad", 0.30, 0.7, 0.012, 0.20},
        {"satisfied", 0.55, 1.2, 0.010, 0.65},
        {"tired", 0.20, 0.5, 0.012, 0.25},
    };
    return cfg;
}

namespace {

constexpr double kTau = 2.0 * 3.14159265358979323846;

Frame pose_at(const SynthClass& cls, double t, double phase0, double amp_scale) {
    const double amp = cls.amplitude * amp_scale;
    const double w = kTau * cls.tempo_hz;
    const double open = 0.75 + 0.5 * cls.openness;  // widens stance and reach

    Frame f(22);
    const Vec3 pelvis(0.25 * amp * std::sin(0.5 * w * t + phase0),
                      1.0 + 0.04 * amp * std::sin(2.0 * w * t + phase0),
                      2.5 + 0.15 * amp * std::sin(0.33 * w * t + phase0));
    const Vec3 chest = pelvis + Vec3(0, 0.28, 0);
    const Vec3 neck = chest + Vec3(0, 0.14, 0);
    const Vec3 head = neck + Vec3(0.03 * amp * std::sin(w * t + phase0), 0.16,
                                  0.03 * amp * std::cos(w * t + phase0));

    // arms: elevation grows with openness, swing with amplitude
    auto arm = [&](double side, double phase) {
        const Vec3 clavicle = chest + Vec3(side * 0.08, 0.08, 0);
        const Vec3 shoulder = chest + Vec3(side * 0.20 * open, 0.10, 0);
        const double elev = 0.25 + 1.05 * cls.openness +
                            0.45 * amp * std::sin(w * t + phase + phase0);
        const double fwd = 0.25 * amp * std::sin(0.7 * w * t + phase + phase0);
        const Vec3 dir(side * std::sin(elev) * std::cos(fwd), -std::cos(elev),
                       std::sin(fwd));
        const Vec3 elbow = shoulder + dir * 0.28;
        const Vec3 hand = elbow + dir * 0.26;
        return std::array<Vec3, 4>{clavicle, shoulder, elbow, hand};
    };
    auto [clav_l, sho_l, elb_l, hand_l] = arm(-1.0, 0.0);
    auto [clav_r, sho_r, elb_r, hand_r] = arm(+1.0, cls.arm_phase_offset);

    // stiff-leg swing, left and right in anti-phase
    auto leg = [&](double side, double phase) {
        const Vec3 hip = pelvis + Vec3(side * 0.11 * open, -0.06, 0);
        const double swing = 0.35 * amp * std::sin(w * t + phase + phase0);
        const Vec3 dir(0.0, -std::cos(swing), std::sin(swing));
        const Vec3 knee = hip + dir * 0.42;
        const Vec3 ankle = knee + dir * 0.42;
        const Vec3 foot = ankle + Vec3(0, -0.04, 0.10);
        const Vec3 toe = foot + Vec3(0, -0.01, 0.08);
        return std::array<Vec3, 5>{hip, knee, ankle, foot, toe};
    };
    auto [hip_l, knee_l, ank_l, foot_l, toe_l] = leg(-1.0, 0.0);
    auto [hip_r, knee_r, ank_r, foot_r, toe_r] = leg(+1.0, kTau / 2.0);

    // order matches default_skeleton()
    f[0] = pelvis; f[1] = chest; f[2] = neck; f[3] = head;
    f[4] = clav_l; f[5] = sho_l; f[6] = elb_l; f[7] = hand_l;
    f[8] = clav_r; f[9] = sho_r; f[10] = elb_r; f[11] = hand_r;
    f[12] = hip_l; f[13] = knee_l; f[14] = ank_l; f[15] = foot_l; f[16] = toe_l;
    f[17] = hip_r; f[18] = knee_r; f[19] = ank_r; f[20] = foot_r; f[21] = toe_r;
    return f;
}

}  // namespace

std::vector<MotionSequence> generate(const SynthConfig& config) {
    config.validate();
    const Skeleton skeleton = default_skeleton();

    std::vector<MotionSequence> sequences;
    for (std::size_t c = 0; c < config.classes.size(); ++c) {
        const auto& cls = config.classes[c];
        for (int s = 0; s < config.sequences_per_class; ++s) {
            std::mt19937_64 rng(mix_seed(config.seed, c * 4096 + s));
            std::uniform_real_distribution<double> uphase(0.0, kTau);
            std::uniform_real_distribution<double> uscale(0.85, 1.15);
            std::normal_distribution<double> noise(0.0, cls.jitter);
            const double phase0 = cls.amplitude > 0.0 ? uphase(rng) : 0.0;
            const double amp_scale = uscale(rng);

            MotionSequence seq;
            seq.skeleton = skeleton;
            seq.fps = config.fps;
            seq.label = cls.name;
            seq.performer_id = "p" + std::to_string(s);
            seq.id = cls.name + "_" + std::to_string(s);
            seq.frames.reserve(config.frames_per_sequence);
            for (int t = 0; t < config.frames_per_sequence; ++t) {
                Frame f = pose_at(cls, t / config.fps, phase0, amp_scale);
                if (cls.jitter > 0.0)
                    for (auto& p : f) {
                        p.x += noise(rng);
                        p.y += noise(rng);
                        p.z += noise(rng);
                    }
                seq.frames.push_back(std::move(f));
            }
            seq.validate();
            sequences.push_back(std::move(seq));
        }
    }
    return sequences;
}

}  // namespace lma
