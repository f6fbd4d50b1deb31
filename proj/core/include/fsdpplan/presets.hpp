#pragma once

#include <string>
#include <vector>

#include "fsdpplan/types.hpp"

namespace fsdpplan {

struct PresetCatalog {
  std::vector<ModelSpec> models;
  std::vector<ClusterSpec> clusters;

  // case-insensitive; "65b" resolves to the canonical "66b" preset
  const ModelSpec* find_model(const std::string& name) const;
  const ClusterSpec* find_cluster(const std::string& name) const;
  ModelSpec model_or_throw(const std::string& name) const;      // UnknownPreset
  ClusterSpec cluster_or_throw(const std::string& name) const;  // UnknownPreset
};

// Compiled-in catalog: seven models (1.3b .. 310b) and eight uniquely named
// A100/V100/H100 clusters at 100/200 Gbps.
const PresetCatalog& builtin_catalog();

// builtin catalog with JSON files from dir layered on top (same-name replaces)
PresetCatalog load_catalog(const std::string& preset_dir);

// load_catalog(FSDP_PLAN_PRESETS) when the variable is set, builtins otherwise
PresetCatalog catalog_from_env();

// The printed cluster table transcribed row for row, duplicates included --
// the source lists 40GB-A100-100Gbps twice across its two tables and carries
// one 40GB-A100-200Gbps row with a printed average of 100 Gbps (an apparent
// typo; the named preset follows the name). num_gpus is 0 where the row
// printed no GPU count.
struct PrintedClusterRow {
  std::string name;
  double printed_bandwidth_bps = 0;
  long long num_gpus = 0;
};
const std::vector<PrintedClusterRow>& printed_cluster_rows();

}  // namespace fsdpplan
