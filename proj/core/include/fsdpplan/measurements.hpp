#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fsdpplan/presets.hpp"
#include "fsdpplan/search.hpp"

// Empirical measurement ingestion and the measured-vs-theory comparison.
// Dataset format: UTF-8 CSV, mandatory header, '#' comment lines, empty cell =
// not reported, literal "OOM" = the run exhausted GPU memory.

namespace fsdpplan {

struct MeasurementRecord {
  std::string model_name;
  std::string cluster_name;
  long long num_gpus = 0;
  long long context_length = 0;
  long long batch_size = 0;
  long long tokens_per_batch = 0;
  std::optional<double> activate_mem_gib;
  std::optional<double> reserved_mem_gib;
  std::optional<double> mfu;             // fraction of peak
  std::optional<double> throughput_tgs;  // tokens per GPU per second
  bool empty_cache = false;              // allocator cache emptied every step
  bool oom = false;                      // any cell carried the OOM marker
  std::string source_file;
  int source_line = 0;  // 1-based line in the file, for diagnostics
};

// Loads one CSV. When a manifest.json sits in the same directory and lists the
// file, its FNV-1a 64 checksum is verified first (ValidationError on mismatch).
std::vector<MeasurementRecord> load_measurements(const std::string& path);

// all *.csv in a directory, sorted by name
std::vector<MeasurementRecord> load_measurements_dir(const std::string& dir);

uint64_t fnv1a64(const void* data, size_t size);
uint64_t fnv1a64_file(const std::string& path);

struct ValidationRow {
  MeasurementRecord record;
  double theory_mfu = 0;  // grid-search max for (model, cluster, N, context)
  double ratio = 0;       // measured / theory
  bool flagged = false;   // measured exceeds theory * (1 + tolerance)
  bool skipped = false;   // OOM row or no measured MFU
  std::string note;
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  long long checked_count = 0;
  long long flagged_count = 0;
  long long skipped_count = 0;
  double tolerance = 0.02;
};

// Every record's model/cluster must resolve in the catalog (UnknownPreset).
// The cluster's GPU count is overridden per record; theory MFU is the grid
// optimum at the record's context length.
ValidationReport validate_against_measurements(const std::vector<MeasurementRecord>& records,
                                               const PresetCatalog& catalog,
                                               double tolerance = 0.02,
                                               const GridParams& grid = {});

}  // namespace fsdpplan
