#include "lma/motion.hpp"

#include <cmath>
#include <stdexcept>

namespace lma {

void MotionSequence::validate() const {
    skeleton.validate();
    if (fps <= 0.0 || !std::isfinite(fps))
        throw std::invalid_argument("sequence '" + id + "': fps must be > 0");
    if (frames.size() < 2)
        throw std::invalid_argument("sequence '" + id + "': needs at least 2 frames");
    for (std::size_t f = 0; f < frames.size(); ++f) {
        if (frames[f].size() != skeleton.size())
            throw std::invalid_argument("sequence '" + id + "': frame " + std::to_string(f) +
                                        " has " + std::to_string(frames[f].size()) +
                                        " joints, skeleton has " + std::to_string(skeleton.size()));
        for (std::size_t j = 0; j < frames[f].size(); ++j)
            if (!frames[f][j].finite())
                throw std::invalid_argument("sequence '" + id + "': non-finite coordinate at frame " +
                                            std::to_string(f) + ", joint '" + skeleton.joints[j] + "'");
    }
}

void WindowSpec::validate() const {
    if (length_frames < 2) throw std::invalid_argument("window length must be >= 2 frames");
    if (stride_frames < 1) throw std::invalid_argument("window stride must be >= 1");
    if (sub_window < 1) throw std::invalid_argument("sub-window must be >= 1");
    if (sub_window >= length_frames)
        throw std::invalid_argument("sub-window must be shorter than the window");
}

namespace {

// First, second and third derivatives straight from positions: central
// stencils on interior frames, one-sided stencils at the edges. Exact for
// polynomials up to the stencil order, and exactly zero for constant input.
void differentiate(const std::vector<Frame>& p, double h, Kinematics& out) {
    const int n = static_cast<int>(p.size());
    const int m = n ? static_cast<int>(p[0].size()) : 0;
    auto zeros = std::vector<std::vector<Vec3>>(n, std::vector<Vec3>(m));
    out.velocity = zeros;
    out.acceleration = zeros;
    out.jerk = zeros;

    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i == 0)
                out.velocity[i][j] = (p[1][j] - p[0][j]) / h;
            else if (i == n - 1)
                out.velocity[i][j] = (p[n - 1][j] - p[n - 2][j]) / h;
            else
                out.velocity[i][j] = (p[i + 1][j] - p[i - 1][j]) / (2.0 * h);
        }
        // Stencils are evaluated as nested position differences so constant
        // input cancels exactly, not just to rounding error.
        if (n >= 3) {
            const double h2 = h * h;
            for (int i = 0; i < n; ++i) {
                int c = i == 0 ? 1 : (i == n - 1 ? n - 2 : i);
                out.acceleration[i][j] =
                    ((p[c + 1][j] - p[c][j]) - (p[c][j] - p[c - 1][j])) / h2;
            }
        }
        if (n >= 4) {
            const double h3 = h * h * h;
            for (int i = 0; i < n; ++i) {
                if (i >= 2 && i <= n - 3) {
                    out.jerk[i][j] = ((p[i + 2][j] - p[i + 1][j]) -
                                      (p[i + 1][j] - p[i - 1][j]) +
                                      (p[i - 1][j] - p[i - 2][j])) /
                                     (2.0 * h3);
                } else if (i <= 1) {
                    out.jerk[i][j] = ((p[3][j] - p[2][j]) - (p[2][j] - p[1][j]) * 2.0 +
                                      (p[1][j] - p[0][j])) /
                                     h3;
                } else {
                    out.jerk[i][j] = ((p[n - 1][j] - p[n - 2][j]) -
                                      (p[n - 2][j] - p[n - 3][j]) * 2.0 +
                                      (p[n - 3][j] - p[n - 4][j])) /
                                     h3;
                }
            }
        }
    }
}

}  // namespace

Kinematics derive_kinematics(const MotionSequence& seq) {
    Kinematics kin;
    differentiate(seq.frames, 1.0 / seq.fps, kin);
    return kin;
}

double sequence_speed_std(const MotionSequence& seq, const Kinematics& kin) {
    std::vector<int> tracked_idx;
    for (const auto& name : seq.skeleton.tracked)
        tracked_idx.push_back(seq.skeleton.index_of(name));

    double sum = 0.0, sum2 = 0.0;
    std::size_t count = 0;
    for (const auto& frame_v : kin.velocity) {
        for (int j : tracked_idx) {
            double s = frame_v[j].norm();
            sum += s;
            sum2 += s * s;
            ++count;
        }
    }
    if (count == 0) return 0.0;
    double mean = sum / static_cast<double>(count);
    double var = sum2 / static_cast<double>(count) - mean * mean;
    return std::sqrt(std::max(0.0, var));
}

std::vector<Window> make_windows(const MotionSequence& seq, const WindowSpec& spec) {
    spec.validate();
    const int n = static_cast<int>(seq.frames.size());
    std::vector<Window> windows;
    if (n < spec.length_frames) return windows;

    Kinematics kin = derive_kinematics(seq);
    double speed_std = sequence_speed_std(seq, kin);

    const int count = (n - spec.length_frames) / spec.stride_frames + 1;
    windows.reserve(count);
    for (int w = 0; w < count; ++w) {
        const int start = w * spec.stride_frames;
        const int stop = start + spec.length_frames;
        Window win;
        win.frames.assign(seq.frames.begin() + start, seq.frames.begin() + stop);
        win.kin.velocity.assign(kin.velocity.begin() + start, kin.velocity.begin() + stop);
        win.kin.acceleration.assign(kin.acceleration.begin() + start,
                                    kin.acceleration.begin() + stop);
        win.kin.jerk.assign(kin.jerk.begin() + start, kin.jerk.begin() + stop);
        win.fps = seq.fps;
        win.sub_window = spec.sub_window;
        win.label = seq.label;
        win.sequence_id = seq.id;
        win.start_frame = start;
        win.parent_speed_std = speed_std;
        windows.push_back(std::move(win));
    }
    return windows;
}

}  // namespace lma
