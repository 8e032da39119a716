#include "lma/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lma/io.hpp"

namespace lma {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json tree_to_json(const Tree& tree) {
    json nodes = json::array();
    for (const auto& n : tree.nodes) {
        json jn = {{"f", n.feature}, {"t", n.threshold}, {"l", n.left},
                   {"r", n.right},   {"c", n.cover}};
        if (n.feature < 0) jn["counts"] = n.class_counts;
        nodes.push_back(std::move(jn));
    }
    return {{"n_classes", tree.n_classes}, {"nodes", std::move(nodes)}};
}

Tree tree_from_json(const json& j) {
    Tree tree;
    tree.n_classes = j.at("n_classes").get<int>();
    for (const auto& jn : j.at("nodes")) {
        Tree::Node n;
        n.feature = jn.at("f").get<int>();
        n.threshold = jn.at("t").get<double>();
        n.left = jn.at("l").get<int>();
        n.right = jn.at("r").get<int>();
        n.cover = jn.at("c").get<double>();
        if (n.feature < 0) n.class_counts = jn.at("counts").get<std::vector<double>>();
        tree.nodes.push_back(std::move(n));
    }
    return tree;
}

}  // namespace

std::string serialize_model(const AnyModel& model) {
    json j;
    j["format_version"] = kFormatVersion;
    if (std::holds_alternative<ForestModel>(model)) {
        const auto& m = std::get<ForestModel>(model);
        j["model_type"] = "random_forest";
        j["schema_hash"] = m.schema_hash;
        j["seed"] = m.seed;
        j["n_classes"] = m.n_classes;
        j["class_names"] = m.class_names;
        j["hyperparams"] = {{"n_trees", m.params.n_trees},
                            {"max_depth", m.params.max_depth},
                            {"min_leaf_samples", m.params.min_leaf_samples},
                            {"features_per_split", m.params.features_per_split},
                            {"bootstrap", m.params.bootstrap}};
        json trees = json::array();
        for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
        j["trees"] = std::move(trees);
    } else {
        const auto& m = std::get<SvmModel>(model);
        j["model_type"] = "linear_svm";
        j["schema_hash"] = m.schema_hash;
        j["seed"] = m.seed;
        j["n_classes"] = m.n_classes;
        j["class_names"] = m.class_names;
        j["hyperparams"] = {{"lambda", m.lambda}};
        j["weights"] = m.weights;
        j["biases"] = m.biases;
        j["feature_mean"] = m.feature_mean;
        j["feature_std"] = m.feature_std;
        j["epoch_objectives"] = m.epoch_objectives;
    }
    return j.dump();
}

AnyModel deserialize_model(const std::string& text) {
    json j = json::parse(text);
    if (j.at("format_version").get<int>() != kFormatVersion)
        throw std::runtime_error("model file: unsupported format version");
    const auto type = j.at("model_type").get<std::string>();
    if (type == "random_forest") {
        ForestModel m;
        m.schema_hash = j.at("schema_hash").get<std::uint64_t>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.n_classes = j.at("n_classes").get<int>();
        m.class_names = j.at("class_names").get<std::vector<std::string>>();
        const auto& hp = j.at("hyperparams");
        m.params.n_trees = hp.at("n_trees").get<int>();
        m.params.max_depth = hp.at("max_depth").get<int>();
        m.params.min_leaf_samples = hp.at("min_leaf_samples").get<int>();
        m.params.features_per_split = hp.at("features_per_split").get<int>();
        m.params.bootstrap = hp.at("bootstrap").get<bool>();
        for (const auto& jt : j.at("trees")) m.trees.push_back(tree_from_json(jt));
        return m;
    }
    if (type == "linear_svm") {
        SvmModel m;
        m.schema_hash = j.at("schema_hash").get<std::uint64_t>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.n_classes = j.at("n_classes").get<int>();
        m.class_names = j.at("class_names").get<std::vector<std::string>>();
        m.lambda = j.at("hyperparams").at("lambda").get<double>();
        m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
        m.biases = j.at("biases").get<std::vector<double>>();
        m.feature_mean = j.at("feature_mean").get<std::vector<double>>();
        m.feature_std = j.at("feature_std").get<std::vector<double>>();
        m.epoch_objectives = j.at("epoch_objectives").get<std::vector<double>>();
        return m;
    }
    throw std::runtime_error("model file: unknown model type '" + type + "'");
}

void save_model(const AnyModel& model, const std::string& path) {
    atomic_write(path, serialize_model(model));
}

AnyModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_model(ss.str());
}

}  // namespace lma
