#pragma once

#include <string>

#include "fsdpplan/types.hpp"

// JSON config files for models and clusters. Grammar documented in
// docs/config-format.md. Parse errors carry file and field context;
// serialize(parse(x)) is semantically idempotent (canonical units, stable
// field order).

namespace fsdpplan {

ModelSpec load_model_config(const std::string& path);
ClusterSpec load_cluster_config(const std::string& path);

// parse from an in-memory document; origin names the source in diagnostics
ModelSpec parse_model_json(const std::string& text, const std::string& origin = "<inline>");
ClusterSpec parse_cluster_json(const std::string& text, const std::string& origin = "<inline>");

std::string serialize_model(const ModelSpec& m);
std::string serialize_cluster(const ClusterSpec& c);

}  // namespace fsdpplan
