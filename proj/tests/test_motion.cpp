#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "lma/io.hpp"
#include "lma/motion.hpp"

using namespace lma;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    auto dir = fs::temp_directory_path() / "lma_motion_tests";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("jsonl loader accepts a minimal 2-frame file") {
    const auto skeleton = default_skeleton();
    auto seq = testutil::stationary_sequence(2, 25.0);
    seq.label = "happy";
    seq.performer_id = "p1";
    const auto path = (temp_dir() / "two_frames.jsonl").string();
    save_sequence_jsonl(seq, path);

    auto loaded = load_sequence(path, MotionFormat::Jsonl, skeleton);
    CHECK(loaded.frames.size() == 2);
    CHECK(loaded.fps == 25.0);
    CHECK(loaded.label == std::optional<std::string>("happy"));
    CHECK(loaded.performer_id == std::optional<std::string>("p1"));
    CHECK(loaded.id == "two_frames");
}

TEST_CASE("non-finite coordinate is reported with its frame index") {
    const auto skeleton = default_skeleton();
    auto seq = testutil::stationary_sequence(10, 25.0);
    const auto path = (temp_dir() / "bad_frame.csv").string();
    save_sequence_csv(seq, path);
    // corrupt one coordinate of frame 7 in the written CSV
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    in.close();
    auto row = text.find("\n7,");
    REQUIRE(row != std::string::npos);
    auto cell = text.find(",", row + 1);
    text.replace(cell + 1, text.find(",", cell + 1) - cell - 1, "nan");
    atomic_write(path, text);

    CHECK_THROWS_WITH_AS(load_sequence(path, MotionFormat::Csv, skeleton),
                         doctest::Contains("frame 7"), ParseError);
}

TEST_CASE("csv and jsonl encodings round-trip to identical sequences") {
    const auto skeleton = default_skeleton();
    auto seq = testutil::translating_sequence(
        12, 30.0, [](int t) { return Vec3(0.01 * t, 0.002 * t * t, -0.005 * t); });
    seq.label = "sad";
    seq.performer_id = "p2";
    const auto jp = (temp_dir() / "roundtrip.jsonl").string();
    const auto cp = (temp_dir() / "roundtrip.csv").string();
    save_sequence_jsonl(seq, jp);
    save_sequence_csv(seq, cp);

    auto a = load_sequence(jp, MotionFormat::Jsonl, skeleton);
    auto b = load_sequence(cp, MotionFormat::Csv, skeleton);
    CHECK(a.fps == b.fps);
    CHECK(a.label == b.label);
    CHECK(a.performer_id == b.performer_id);
    REQUIRE(a.frames.size() == b.frames.size());
    for (std::size_t t = 0; t < a.frames.size(); ++t)
        for (std::size_t j = 0; j < skeleton.size(); ++j)
            CHECK(a.frames[t][j] == b.frames[t][j]);
}

TEST_CASE("loader reorders file joints to skeleton order") {
    const auto skeleton = default_skeleton();
    auto seq = testutil::stationary_sequence(3, 25.0);
    const auto path = (temp_dir() / "shuffled.jsonl").string();
    // write with the first two joints swapped in the header and each frame
    MotionSequence shuffled = seq;
    std::swap(shuffled.skeleton.joints[0], shuffled.skeleton.joints[1]);
    for (auto& f : shuffled.frames) std::swap(f[0], f[1]);
    save_sequence_jsonl(shuffled, path);

    auto loaded = load_sequence(path, MotionFormat::Jsonl, skeleton);
    for (std::size_t j = 0; j < skeleton.size(); ++j)
        CHECK(loaded.frames[0][j] == seq.frames[0][j]);
}

TEST_CASE("format detection and basic file validation") {
    CHECK(format_from_path("a/b.jsonl") == MotionFormat::Jsonl);
    CHECK(format_from_path("a/b.CSV") == MotionFormat::Csv);
    CHECK_THROWS_AS(format_from_path("a/b.txt"), ParseError);
    CHECK_THROWS_AS(
        load_sequence((temp_dir() / "missing.jsonl").string(), MotionFormat::Jsonl,
                      default_skeleton()),
        ParseError);
}

TEST_CASE("constant-velocity line gives exact velocity at interior frames") {
    auto seq = testutil::translating_sequence(20, 25.0,
                                              [](int t) { return Vec3(0.1 * t, 0, 0); });
    auto kin = derive_kinematics(seq);
    for (int t = 0; t < 20; ++t)
        for (std::size_t j = 0; j < seq.skeleton.size(); ++j) {
            CHECK(kin.velocity[t][j].x == doctest::Approx(2.5).epsilon(1e-12));
            CHECK(kin.velocity[t][j].y == doctest::Approx(0.0));
            CHECK(kin.acceleration[t][j].norm() == doctest::Approx(0.0));
        }
}

TEST_CASE("stationary sequence has zero velocity, acceleration and jerk") {
    auto seq = testutil::stationary_sequence(15, 25.0);
    auto kin = derive_kinematics(seq);
    for (int t = 0; t < 15; ++t)
        for (std::size_t j = 0; j < seq.skeleton.size(); ++j) {
            CHECK(kin.velocity[t][j].norm() == 0.0);
            CHECK(kin.acceleration[t][j].norm() == 0.0);
            CHECK(kin.jerk[t][j].norm() == 0.0);
        }
    CHECK(sequence_speed_std(seq, kin) == 0.0);
}

TEST_CASE("quadratic trajectory recovers acceleration 2 on interior frames") {
    const double fps = 10.0;
    auto seq = testutil::translating_sequence(30, fps, [fps](int t) {
        const double s = t / fps;
        return Vec3(s * s, 0, 0);
    });
    auto kin = derive_kinematics(seq);
    for (int t = 1; t < 29; ++t)
        CHECK(std::abs(kin.acceleration[t][0].x - 2.0) < 1e-6);
}

TEST_CASE("cubic trajectory recovers jerk 6 on interior frames") {
    const double fps = 10.0;
    auto seq = testutil::translating_sequence(30, fps, [fps](int t) {
        const double s = t / fps;
        return Vec3(s * s * s, 0, 0);
    });
    auto kin = derive_kinematics(seq);
    for (int t = 2; t < 28; ++t) CHECK(std::abs(kin.jerk[t][0].x - 6.0) < 1e-3);
}

TEST_CASE("window counts follow floor((N - length)/stride) + 1") {
    WindowSpec spec;
    spec.length_frames = 25;
    spec.sub_window = 5;

    spec.stride_frames = 5;
    CHECK(make_windows(testutil::stationary_sequence(100, 25.0), spec).size() == 16);

    spec.stride_frames = 1;
    CHECK(make_windows(testutil::stationary_sequence(25, 25.0), spec).size() == 1);
    CHECK(make_windows(testutil::stationary_sequence(24, 25.0), spec).empty());
}

TEST_CASE("windows carry provenance and a kinematics slice") {
    auto seq = testutil::translating_sequence(40, 25.0,
                                              [](int t) { return Vec3(0.1 * t, 0, 0); });
    seq.label = "excited";
    WindowSpec spec;
    spec.length_frames = 10;
    spec.stride_frames = 10;
    auto windows = make_windows(seq, spec);
    REQUIRE(windows.size() == 4);
    auto kin = derive_kinematics(seq);
    for (std::size_t w = 0; w < windows.size(); ++w) {
        CHECK(windows[w].start_frame == int(w) * 10);
        CHECK(windows[w].label == seq.label);
        CHECK(windows[w].sequence_id == seq.id);
        CHECK(windows[w].fps == seq.fps);
        CHECK(windows[w].length() == 10);
        for (int t = 0; t < 10; ++t) {
            // kinematics come from the full sequence, not the isolated slice
            CHECK(windows[w].kin.velocity[t][0] == kin.velocity[w * 10 + t][0]);
            CHECK(windows[w].frames[t][0] == seq.frames[w * 10 + t][0]);
        }
    }
}

TEST_CASE("sequence and window specs reject broken invariants") {
    auto seq = testutil::stationary_sequence(5, 25.0);
    seq.fps = 0.0;
    CHECK_THROWS_AS(seq.validate(), std::invalid_argument);
    seq.fps = 25.0;
    seq.frames[2].pop_back();
    CHECK_THROWS_AS(seq.validate(), std::invalid_argument);

    WindowSpec spec;
    spec.length_frames = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.length_frames = 10;
    spec.sub_window = 10;  // must be shorter than the window
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
