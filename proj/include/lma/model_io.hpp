#pragma once

#include <string>
#include <variant>

#include "lma/forest.hpp"
#include "lma/svm.hpp"

namespace lma {

using AnyModel = std::variant<ForestModel, SvmModel>;

/// Versioned self-describing JSON: header {format_version, model_type,
/// schema_hash, hyperparams, seed} followed by the tree or weight payload.
/// Round-trips are bit-exact (doubles serialize in shortest round-trip
/// form) and serialization is byte-identical for identical models.
void save_model(const AnyModel& model, const std::string& path);
AnyModel load_model(const std::string& path);

std::string serialize_model(const AnyModel& model);
AnyModel deserialize_model(const std::string& text);

}  // namespace lma
