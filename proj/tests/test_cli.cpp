#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "helpers.hpp"
#include "lma/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_cli;  // path to the command-line binary under test
fs::path g_work;

int run(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > " + (g_work / "stdout.txt").string() +
                            " 2> " + (g_work / "stderr.txt").string();
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string captured(const char* which) {
    std::ifstream in(g_work / (std::string(which) + ".txt"));
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

std::string file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), {});
}

void write_config(const fs::path& path) {
    std::ofstream out(path);
    out << R"({
  "seed": 11,
  "cv_folds": 3,
  "window": {"length_frames": 25, "stride_frames": 3, "sub_window": 5},
  "grid": {"rf": {"n_trees": [15], "max_depth": [8]}},
  "explain": {"max_explained": 8},
  "synth": {
    "sequences_per_class": 4,
    "frames_per_sequence": 60,
    "classes": [
      {"name": "brisk", "amplitude": 1.1, "tempo_hz": 2.4, "jitter": 0.01, "openness": 0.8},
      {"name": "calm", "amplitude": 0.3, "tempo_hz": 0.7, "jitter": 0.01, "openness": 0.3}
    ]
  }
})";
}

}  // namespace

TEST_CASE("extract: window arithmetic, empty input, and idempotence") {
    const fs::path out = g_work / "extract_case";
    fs::create_directories(out / "dataset");
    auto seq = testutil::translating_sequence(
        100, 25.0, [](int t) { return lma::Vec3(0.02 * t, 0.03 * std::sin(0.3 * t), 0); },
        "walk");
    seq.label = "neutral";
    lma::save_sequence_jsonl(seq, (out / "dataset" / "walk.jsonl").string());

    CHECK(run("--out " + (out).string() + " extract --input " +
              (out / "dataset").string()) == 0);
    std::ifstream in(out / "features.csv");
    std::string line;
    int rows = -2;  // seed header + column header
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 76);

    const auto first = file_bytes(out / "features.csv");
    CHECK(run("--out " + out.string() + " extract --input " + (out / "dataset").string()) ==
          0);
    CHECK(file_bytes(out / "features.csv") == first);

    fs::create_directories(out / "empty");
    CHECK(run("--out " + out.string() + " extract --input " + (out / "empty").string()) ==
          2);
    CHECK(run("--out " + out.string() + " extract --input " +
              (out / "no_such_dir").string()) == 2);
}

TEST_CASE("evaluate and explain fail helpfully before their inputs exist") {
    const fs::path out = g_work / "missing_case";
    fs::create_directories(out);
    CHECK(run("--out " + out.string() + " evaluate") == 2);
    auto err = captured("stderr");
    CHECK(err.find("features.csv") != std::string::npos);
    CHECK(err.find("extract") != std::string::npos);

    // features present but no model: the message must point at `train`
    fs::create_directories(out / "dataset");
    auto seq = testutil::phase_fixture(2, 40, 3);
    for (const auto& s : seq)
        lma::save_sequence_jsonl(s, (out / "dataset" / (s.id + ".jsonl")).string());
    REQUIRE(run("--out " + out.string() + " extract --input " +
                (out / "dataset").string()) == 0);
    CHECK(run("--out " + out.string() + " evaluate") == 2);
    err = captured("stderr");
    CHECK(err.find("model.json") != std::string::npos);
    CHECK(err.find("train") != std::string::npos);
}

TEST_CASE("full pipeline produces every artifact deterministically") {
    const fs::path out = g_work / "pipeline";
    fs::create_directories(out);
    const fs::path cfg = g_work / "config.json";
    write_config(cfg);
    const std::string base = "--config " + cfg.string() + " --out " + out.string() + " ";

    REQUIRE(run(base + "synth") == 0);
    CHECK(fs::exists(out / "dataset" / "brisk_0.jsonl"));
    CHECK(fs::exists(out / "dataset" / "calm_3.jsonl"));

    REQUIRE(run(base + "extract --input " + (out / "dataset").string()) == 0);
    REQUIRE(run(base + "train") == 0);
    CHECK(fs::exists(out / "model.json"));
    CHECK(fs::exists(out / "grid_results.csv"));

    // same seed, same inputs: byte-identical model
    const auto model_bytes = file_bytes(out / "model.json");
    REQUIRE(run(base + "train") == 0);
    CHECK(file_bytes(out / "model.json") == model_bytes);

    REQUIRE(run(base + "evaluate") == 0);
    CHECK(fs::exists(out / "metrics.csv"));
    CHECK(fs::exists(out / "confusion.csv"));
    CHECK(fs::exists(out / "confusion.svg"));
    CHECK(file_bytes(out / "metrics.csv").find("# seed=11") == 0);

    REQUIRE(run(base + "explain") == 0);
    CHECK(fs::exists(out / "shap.csv"));
    CHECK(fs::exists(out / "shap_summary.csv"));
    CHECK(fs::exists(out / "shap_summary.svg"));

    REQUIRE(run(base + "sweep --input " + (out / "dataset").string() +
                " --lengths 15,25") == 0);
    CHECK(fs::exists(out / "sweep.csv"));
    CHECK(fs::exists(out / "sweep.svg"));

    REQUIRE(run(base + "report") == 0);
    const auto report = file_bytes(out / "report.md");
    for (const char* artifact : {"features.csv", "model.json", "metrics.csv",
                                 "confusion.csv", "sweep.csv", "shap_summary.csv"})
        CHECK(report.find(artifact) != std::string::npos);
}

TEST_CASE("command-line seed flag overrides the config file") {
    const fs::path out = g_work / "seed_override";
    fs::create_directories(out / "dataset");
    const fs::path cfg = g_work / "config.json";
    write_config(cfg);

    REQUIRE(run("--config " + cfg.string() + " --out " + out.string() + " synth") == 0);
    const auto with_config_seed = file_bytes(out / "dataset" / "brisk_0.jsonl");
    REQUIRE(run("--config " + cfg.string() + " --seed 99 --out " + out.string() +
                " synth") == 0);
    CHECK(file_bytes(out / "dataset" / "brisk_0.jsonl") != with_config_seed);
}

TEST_CASE("unknown subcommands and bad config files are input errors") {
    CHECK(run("frobnicate") != 0);
    const fs::path bad = g_work / "bad.json";
    {
        std::ofstream o(bad);
        o << "{not json";
    }
    CHECK(run("--config " + bad.string() + " --out " + (g_work / "x").string() +
              " synth") != 0);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-cli-binary> [doctest args]\n");
        return 1;
    }
    g_cli = argv[1];
    g_work = fs::temp_directory_path() / "lma_cli_tests";
    fs::remove_all(g_work);
    fs::create_directories(g_work);

    doctest::Context context;
    context.applyCommandLine(argc - 1, argv + 1);
    return context.run();
}
