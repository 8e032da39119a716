// Command-line pipeline: synth -> extract -> train -> evaluate/sweep ->
// explain -> report. Exit codes: 0 ok, 1 internal error, 2 bad input/config.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lma/cv.hpp"
#include "lma/dataset.hpp"
#include "lma/io.hpp"
#include "lma/metrics.hpp"
#include "lma/model_io.hpp"
#include "lma/shap.hpp"
#include "lma/svg.hpp"
#include "lma/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
    std::uint64_t seed = 42;
    std::string out_dir = "out";
    int jobs = 0;  // 0 = hardware concurrency
    lma::WindowSpec window;
    double threshold_multiplier = 1.0;
    std::string family = "rf";
    int cv_folds = 3;
    lma::ParamGrid rf_grid = {{"n_trees", {100, 300}},
                              {"max_depth", {8, 16, -1}},
                              {"features_per_split", {7, 16}}};
    lma::ParamGrid svm_grid = {{"lambda", {1e-4, 1e-3}},
                               {"epochs", {60}},
                               {"learning_rate", {0.1}}};
    int background_size = 16;
    int kernel_samples = 4096;
    int max_explained = 500;
    lma::SynthConfig synth = lma::default_synth_config();
};

lma::ParamGrid grid_from_json(const json& j) {
    lma::ParamGrid grid;
    for (const auto& [key, values] : j.items())
        grid.emplace_back(key, values.get<std::vector<double>>());
    return grid;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    json j = json::parse(in);
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
    if (j.contains("window")) {
        const auto& w = j["window"];
        if (w.contains("length_frames")) cfg.window.length_frames = w["length_frames"].get<int>();
        if (w.contains("stride_frames")) cfg.window.stride_frames = w["stride_frames"].get<int>();
        if (w.contains("sub_window")) cfg.window.sub_window = w["sub_window"].get<int>();
    }
    if (j.contains("threshold_multiplier"))
        cfg.threshold_multiplier = j["threshold_multiplier"].get<double>();
    if (j.contains("family")) cfg.family = j["family"].get<std::string>();
    if (j.contains("cv_folds")) cfg.cv_folds = j["cv_folds"].get<int>();
    if (j.contains("grid")) {
        if (j["grid"].contains("rf")) cfg.rf_grid = grid_from_json(j["grid"]["rf"]);
        if (j["grid"].contains("svm")) cfg.svm_grid = grid_from_json(j["grid"]["svm"]);
    }
    if (j.contains("explain")) {
        const auto& e = j["explain"];
        if (e.contains("background_size")) cfg.background_size = e["background_size"].get<int>();
        if (e.contains("kernel_samples")) cfg.kernel_samples = e["kernel_samples"].get<int>();
        if (e.contains("max_explained")) cfg.max_explained = e["max_explained"].get<int>();
    }
    if (j.contains("synth")) {
        const auto& s = j["synth"];
        if (s.contains("sequences_per_class"))
            cfg.synth.sequences_per_class = s["sequences_per_class"].get<int>();
        if (s.contains("frames_per_sequence"))
            cfg.synth.frames_per_sequence = s["frames_per_sequence"].get<int>();
        if (s.contains("fps")) cfg.synth.fps = s["fps"].get<double>();
        if (s.contains("classes")) {
            cfg.synth.classes.clear();
            for (const auto& c : s["classes"]) {
                lma::SynthClass sc;
                sc.name = c.at("name").get<std::string>();
                if (c.contains("amplitude")) sc.amplitude = c["amplitude"].get<double>();
                if (c.contains("tempo_hz")) sc.tempo_hz = c["tempo_hz"].get<double>();
                if (c.contains("jitter")) sc.jitter = c["jitter"].get<double>();
                if (c.contains("openness")) sc.openness = c["openness"].get<double>();
                if (c.contains("arm_phase_offset"))
                    sc.arm_phase_offset = c["arm_phase_offset"].get<double>();
                cfg.synth.classes.push_back(std::move(sc));
            }
        }
    }
}

std::vector<lma::MotionSequence> load_dir(const std::string& input_dir) {
    const auto skeleton = lma::default_skeleton();
    std::vector<fs::path> files;
    if (!fs::is_directory(input_dir))
        throw std::invalid_argument("input directory '" + input_dir + "' does not exist");
    for (const auto& entry : fs::directory_iterator(input_dir)) {
        auto ext = entry.path().extension().string();
        if (ext == ".jsonl" || ext == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<lma::MotionSequence> sequences;
    for (const auto& f : files) {
        try {
            sequences.push_back(
                lma::load_sequence(f.string(), lma::format_from_path(f.string()), skeleton));
        } catch (const std::exception& e) {
            std::cerr << "warning: skipping " << f << ": " << e.what() << "\n";
        }
    }
    return sequences;
}

void require_file(const std::string& path, const std::string& producer) {
    if (!fs::exists(path))
        throw std::invalid_argument("missing " + path + "; run `lma " + producer +
                                    "` first");
}

std::string seed_header(const RunConfig& cfg) {
    return "# seed=" + std::to_string(cfg.seed) + "\n";
}

// ---- commands -------------------------------------------------------------

int cmd_synth(const RunConfig& cfg) {
    lma::SynthConfig sc = cfg.synth;
    sc.seed = cfg.seed;
    auto sequences = lma::generate(sc);
    const fs::path dir = fs::path(cfg.out_dir) / "dataset";
    fs::create_directories(dir);
    for (const auto& seq : sequences)
        lma::save_sequence_jsonl(seq, (dir / (seq.id + ".jsonl")).string());
    std::cout << "wrote " << sequences.size() << " sequences to " << dir << "\n";
    return 0;
}

int cmd_extract(const RunConfig& cfg, const std::string& input_dir) {
    auto sequences = load_dir(input_dir);
    if (sequences.empty()) {
        std::cerr << "error: no loadable sequences in " << input_dir << "\n";
        return 2;
    }
    lma::ThresholdPolicy policy{cfg.threshold_multiplier};
    auto ds = lma::extract_dataset(sequences, cfg.window, policy, cfg.jobs);
    fs::create_directories(cfg.out_dir);
    const std::string path = (fs::path(cfg.out_dir) / "features.csv").string();
    lma::save_dataset_csv(ds, path);
    // prepend the root seed header
    std::ifstream in(path);
    std::stringstream body;
    body << in.rdbuf();
    in.close();
    lma::atomic_write(path, seed_header(cfg) + body.str());
    std::cout << "extracted " << ds.size() << " windows from " << sequences.size()
              << " sequences -> " << path << "\n";
    return 0;
}

int cmd_train(const RunConfig& cfg) {
    const std::string features = (fs::path(cfg.out_dir) / "features.csv").string();
    require_file(features, "extract");
    auto ds = lma::load_dataset_csv(features);
    if (ds.n_classes() < 2)
        throw std::invalid_argument("training needs at least 2 labeled classes");

    const auto family = lma::family_from_string(cfg.family);
    const auto& grid = family == lma::ModelFamily::RandomForest ? cfg.rf_grid : cfg.svm_grid;
    auto plan = lma::CvPlan::grouped(ds.sequence_ids, cfg.cv_folds, cfg.seed);
    auto result = lma::grid_search_cv(ds.rows, ds.labels, ds.n_classes(), family, grid,
                                      plan, cfg.seed, cfg.jobs);

    std::ostringstream table;
    table << seed_header(cfg) << "cell";
    for (const auto& [name, _] : grid) table << "," << name;
    table << ",mean_val_accuracy,failed\n";
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        table << c;
        for (const auto& [name, _] : grid) table << "," << result.cells[c].params.at(name);
        table << "," << result.cells[c].mean_accuracy << "," << (result.cells[c].failed ? 1 : 0)
              << "\n";
    }
    fs::create_directories(cfg.out_dir);
    lma::atomic_write((fs::path(cfg.out_dir) / "grid_results.csv").string(), table.str());

    const auto& best = result.best_params();
    lma::AnyModel model;
    if (family == lma::ModelFamily::RandomForest) {
        auto m = lma::train_forest(ds.rows, ds.labels, ds.n_classes(),
                                   lma::forest_params_from(best), cfg.seed, cfg.jobs);
        m.schema_hash = ds.schema->hash();
        m.class_names = ds.class_names;
        model = std::move(m);
    } else {
        auto m = lma::train_svm(ds.rows, ds.labels, ds.n_classes(),
                                lma::svm_params_from(best), cfg.seed);
        m.schema_hash = ds.schema->hash();
        m.class_names = ds.class_names;
        model = std::move(m);
    }
    const std::string model_path = (fs::path(cfg.out_dir) / "model.json").string();
    lma::save_model(model, model_path);
    std::cout << "best validation accuracy "
              << result.cells[result.best_index].mean_accuracy << " -> " << model_path
              << "\n";
    return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
    const std::string features = (fs::path(cfg.out_dir) / "features.csv").string();
    const std::string model_path = (fs::path(cfg.out_dir) / "model.json").string();
    require_file(features, "extract");
    require_file(model_path, "train");
    auto ds = lma::load_dataset_csv(features);
    auto model = lma::load_model(model_path);

    lma::ModelFamily family;
    lma::ParamMap params;
    if (std::holds_alternative<lma::ForestModel>(model)) {
        family = lma::ModelFamily::RandomForest;
        const auto& p = std::get<lma::ForestModel>(model).params;
        params = {{"n_trees", double(p.n_trees)},
                  {"max_depth", double(p.max_depth)},
                  {"min_leaf_samples", double(p.min_leaf_samples)},
                  {"features_per_split", double(p.features_per_split)}};
    } else {
        family = lma::ModelFamily::Svm;
        params = {{"lambda", std::get<lma::SvmModel>(model).lambda}};
    }

    auto plan = lma::CvPlan::grouped(ds.sequence_ids, cfg.cv_folds, cfg.seed);
    auto pred = lma::cv_predict(ds.rows, ds.labels, ds.n_classes(), family, params, plan,
                                cfg.seed, cfg.jobs);
    auto cm = lma::ConfusionMatrix::from_predictions(ds.labels, pred, ds.class_names);
    auto rep = lma::per_class_metrics(cm);

    lma::save_confusion_csv(cm, (fs::path(cfg.out_dir) / "confusion.csv").string());
    lma::save_metrics_csv(cm, rep, (fs::path(cfg.out_dir) / "metrics.csv").string());

    // sequence-level accuracy: majority vote over each sequence's windows
    std::map<std::string, std::map<int, int>> votes;
    std::map<std::string, int> truth;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        ++votes[ds.sequence_ids[i]][pred[i]];
        truth[ds.sequence_ids[i]] = ds.labels[i];
    }
    int seq_correct = 0;
    for (const auto& [sid, v] : votes) {
        int best = -1, best_count = -1;
        for (const auto& [cls, count] : v)
            if (count > best_count) { best = cls; best_count = count; }
        if (best == truth[sid]) ++seq_correct;
    }
    const double seq_acc = static_cast<double>(seq_correct) / votes.size();
    {
        std::ifstream in((fs::path(cfg.out_dir) / "metrics.csv").string());
        std::stringstream body;
        body << in.rdbuf();
        in.close();
        body << "accuracy_sequence_majority," << seq_acc << ",,,\n";
        lma::atomic_write((fs::path(cfg.out_dir) / "metrics.csv").string(),
                          seed_header(cfg) + body.str());
    }

    std::vector<std::vector<double>> heat(cm.n_classes(), std::vector<double>(cm.n_classes()));
    for (int r = 0; r < cm.n_classes(); ++r)
        for (int c = 0; c < cm.n_classes(); ++c) heat[r][c] = double(cm.counts[r][c]);
    lma::atomic_write((fs::path(cfg.out_dir) / "confusion.svg").string(),
                      lma::svg::heatmap(heat, cm.class_names, cm.class_names));

    std::cout << "window accuracy " << rep.accuracy << ", sequence accuracy " << seq_acc
              << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::string& input_dir,
              const std::vector<int>& lengths) {
    auto sequences = load_dir(input_dir);
    if (sequences.empty()) {
        std::cerr << "error: no loadable sequences in " << input_dir << "\n";
        return 2;
    }
    const auto family = lma::family_from_string(cfg.family);
    lma::ParamMap params;  // defaults
    auto rows = lma::window_sweep(sequences, lengths, cfg.window,
                                  lma::ThresholdPolicy{cfg.threshold_multiplier}, family,
                                  params, cfg.cv_folds, cfg.seed, cfg.jobs);
    fs::create_directories(cfg.out_dir);
    lma::save_sweep_csv(rows, (fs::path(cfg.out_dir) / "sweep.csv").string());

    std::vector<double> xs, ys;
    for (const auto& r : rows)
        if (r.feasible) {
            xs.push_back(r.length);
            ys.push_back(r.mean_accuracy);
        }
    lma::atomic_write((fs::path(cfg.out_dir) / "sweep.svg").string(),
                      lma::svg::line_plot(xs, {{lma::to_string(family), ys}},
                                          "window length (frames)", "mean CV accuracy"));
    std::cout << "swept " << rows.size() << " window lengths -> sweep.csv\n";
    return 0;
}

int cmd_explain(const RunConfig& cfg) {
    const std::string features = (fs::path(cfg.out_dir) / "features.csv").string();
    const std::string model_path = (fs::path(cfg.out_dir) / "model.json").string();
    require_file(features, "extract");
    require_file(model_path, "train");
    auto ds = lma::load_dataset_csv(features);
    auto model = lma::load_model(model_path);

    const std::size_t n_explain =
        std::min<std::size_t>(ds.size(), static_cast<std::size_t>(cfg.max_explained));
    std::vector<lma::Attribution> attrs;
    attrs.reserve(n_explain);

    if (std::holds_alternative<lma::ForestModel>(model)) {
        const auto& m = std::get<lma::ForestModel>(model);
        if (m.schema_hash != ds.schema->hash())
            throw std::invalid_argument("model schema hash does not match features.csv");
        for (std::size_t i = 0; i < n_explain; ++i) {
            const int cls = m.predict(ds.rows[i]).label;
            auto a = lma::tree_shap(m, ds.rows[i], cls);
            a.sample_id = ds.sequence_ids[i] + ":" + std::to_string(ds.start_frames[i]);
            attrs.push_back(std::move(a));
        }
    } else {
        const auto& m = std::get<lma::SvmModel>(model);
        if (m.schema_hash != ds.schema->hash())
            throw std::invalid_argument("model schema hash does not match features.csv");
        auto background = lma::k_medoids(ds.rows, cfg.background_size, cfg.seed);
        for (std::size_t i = 0; i < n_explain; ++i) {
            const int cls = m.predict(ds.rows[i]).label;
            lma::ModelFn fn = [&m, cls](const std::vector<double>& x) {
                return m.predict_proba(x)[cls];
            };
            auto a = lma::kernel_shap(fn, ds.rows[i], background, cfg.kernel_samples,
                                      lma::mix_seed(cfg.seed, i));
            a.explained_class = cls;
            a.predicted_class = cls;
            a.sample_id = ds.sequence_ids[i] + ":" + std::to_string(ds.start_frames[i]);
            attrs.push_back(std::move(a));
        }
    }

    std::ostringstream out;
    out << seed_header(cfg) << "sample";
    for (const auto& n : ds.schema->names) out << "," << n;
    out << ",base,predicted_class\n";
    for (const auto& a : attrs) {
        out << a.sample_id;
        for (double p : a.phi) out << "," << p;
        out << "," << a.base_value << "," << a.predicted_class << "\n";
    }
    lma::atomic_write((fs::path(cfg.out_dir) / "shap.csv").string(), out.str());

    auto table = lma::summarize(attrs);
    std::ostringstream summary;
    summary << seed_header(cfg) << "rank,feature,mean_abs_phi\n";
    for (std::size_t r = 0; r < table.ranking.size(); ++r)
        summary << r << "," << ds.schema->names[table.ranking[r]] << ","
                << table.mean_abs_phi[table.ranking[r]] << "\n";
    lma::atomic_write((fs::path(cfg.out_dir) / "shap_summary.csv").string(), summary.str());

    std::vector<std::pair<std::string, double>> bars;
    for (std::size_t r = 0; r < std::min<std::size_t>(10, table.ranking.size()); ++r)
        bars.emplace_back(ds.schema->names[table.ranking[r]],
                          table.mean_abs_phi[table.ranking[r]]);
    lma::atomic_write((fs::path(cfg.out_dir) / "shap_summary.svg").string(),
                      lma::svg::bar_chart(bars, "mean |phi|"));
    std::cout << "explained " << attrs.size() << " windows -> shap.csv\n";
    return 0;
}

int cmd_report(const RunConfig& cfg) {
    std::ostringstream md;
    md << "# Run report\n\nRoot seed: " << cfg.seed << "\n\n";
    struct Item { const char* file; const char* desc; };
    const Item items[] = {
        {"features.csv", "LMA descriptor matrix, one row per window"},
        {"grid_results.csv", "grid-search validation accuracy per cell"},
        {"model.json", "trained model"},
        {"metrics.csv", "per-class precision/recall/F1, macro averages, accuracy"},
        {"confusion.csv", "confusion matrix (rows = true)"},
        {"confusion.svg", "confusion heatmap"},
        {"sweep.csv", "window-size sweep accuracy table"},
        {"sweep.svg", "window-size sweep plot"},
        {"shap.csv", "per-window Shapley attributions"},
        {"shap_summary.csv", "feature ranking by mean |phi|"},
        {"shap_summary.svg", "top-10 feature impact chart"},
    };
    md << "| artifact | description |\n|---|---|\n";
    for (const auto& item : items) {
        const fs::path p = fs::path(cfg.out_dir) / item.file;
        if (fs::exists(p))
            md << "| [" << item.file << "](" << item.file << ") | " << item.desc << " |\n";
    }
    fs::create_directories(cfg.out_dir);
    lma::atomic_write((fs::path(cfg.out_dir) / "report.md").string(), md.str());
    std::cout << "wrote " << (fs::path(cfg.out_dir) / "report.md").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LMA descriptors, emotion classifiers and Shapley explanations"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path, input_dir = "out/dataset";
    std::string lengths_arg = "5,10,15,20,25,30,40";
    app.add_option("--config", config_path, "JSON config file");
    auto* seed_opt = app.add_option("--seed", cfg.seed, "root RNG seed");
    auto* out_opt = app.add_option("--out", cfg.out_dir, "output directory");
    auto* jobs_opt = app.add_option("--jobs", cfg.jobs, "worker threads (0 = all cores)");

    auto* synth = app.add_subcommand("synth", "generate a labeled synthetic dataset");
    auto* extract = app.add_subcommand("extract", "window sequences and extract features");
    extract->add_option("--input", input_dir, "directory of .jsonl/.csv sequences");
    auto* train = app.add_subcommand("train", "grid-search CV and train the final model");
    train->add_option("--family", cfg.family, "model family: rf or svm");
    auto* evaluate = app.add_subcommand("evaluate", "grouped-CV metrics and confusion matrix");
    auto* sweep = app.add_subcommand("sweep", "accuracy vs window length");
    sweep->add_option("--input", input_dir, "directory of .jsonl/.csv sequences");
    sweep->add_option("--lengths", lengths_arg, "comma-separated window lengths");
    sweep->add_option("--family", cfg.family, "model family: rf or svm");
    auto* explain = app.add_subcommand("explain", "Shapley attributions for the model");
    auto* report = app.add_subcommand("report", "markdown summary of produced artifacts");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            RunConfig file_cfg;
            // flags win over the config file
            std::uint64_t flag_seed = cfg.seed;
            std::string flag_out = cfg.out_dir;
            int flag_jobs = cfg.jobs;
            apply_config_file(file_cfg, config_path);
            cfg.window = file_cfg.window;
            cfg.threshold_multiplier = file_cfg.threshold_multiplier;
            cfg.cv_folds = file_cfg.cv_folds;
            cfg.rf_grid = file_cfg.rf_grid;
            cfg.svm_grid = file_cfg.svm_grid;
            cfg.background_size = file_cfg.background_size;
            cfg.kernel_samples = file_cfg.kernel_samples;
            cfg.max_explained = file_cfg.max_explained;
            cfg.synth = file_cfg.synth;
            if (!train->count("--family") && !sweep->count("--family"))
                cfg.family = file_cfg.family;
            cfg.seed = seed_opt->count() ? flag_seed : file_cfg.seed;
            cfg.out_dir = out_opt->count() ? flag_out : file_cfg.out_dir;
            cfg.jobs = jobs_opt->count() ? flag_jobs : file_cfg.jobs;
        }

        if (synth->parsed()) return cmd_synth(cfg);
        if (extract->parsed()) return cmd_extract(cfg, input_dir);
        if (train->parsed()) return cmd_train(cfg);
        if (evaluate->parsed()) return cmd_evaluate(cfg);
        if (sweep->parsed()) {
            std::vector<int> lengths;
            std::stringstream ss(lengths_arg);
            std::string tok;
            while (std::getline(ss, tok, ',')) lengths.push_back(std::stoi(tok));
            return cmd_sweep(cfg, input_dir, lengths);
        }
        if (explain->parsed()) return cmd_explain(cfg);
        if (report->parsed()) return cmd_report(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const lma::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
