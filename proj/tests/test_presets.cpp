#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "fsdpplan/presets.hpp"

using namespace fsdpplan;

namespace {

struct ModelRow {
  const char* name;
  long long layers, hidden, heads;
};

struct ClusterRow {
  const char* name;
  double mem_gib, peak_tflops, gbps;
  long long num_gpus;
};

}  // namespace

TEST_SUITE("presets") {

TEST_CASE("the seven built-in models match the published configurations") {
  // hidden 4086 for 7b is intentional: it transcribes the source verbatim
  const ModelRow expected[] = {
      {"1.3b", 24, 2048, 16}, {"7b", 32, 4086, 32},    {"13b", 40, 5120, 40},
      {"30b", 60, 6656, 64},  {"66b", 80, 8192, 64},   {"175b", 96, 12288, 96},
      {"310b", 96, 16384, 128},
  };
  const PresetCatalog& cat = builtin_catalog();
  REQUIRE(cat.models.size() == 7);
  for (size_t i = 0; i < 7; ++i) {
    CAPTURE(expected[i].name);
    CHECK(cat.models[i].name == expected[i].name);
    CHECK(cat.models[i].layers == expected[i].layers);
    CHECK(cat.models[i].hidden == expected[i].hidden);
    CHECK(cat.models[i].heads == expected[i].heads);
    CHECK(cat.models[i].seq_len == 2048);
    CHECK(cat.models[i].bytes_per_value == 2);
  }
}

TEST_CASE("the eight built-in clusters match the published hardware") {
  const ClusterRow expected[] = {
      {"16GB-V100-100Gbps", 16, 125, 100, 1}, {"16GB-V100-200Gbps", 16, 125, 200, 1},
      {"40GB-A100-100Gbps", 40, 312, 100, 128}, {"40GB-A100-200Gbps", 40, 312, 200, 512},
      {"80GB-A100-100Gbps", 80, 312, 100, 1}, {"80GB-A100-200Gbps", 80, 312, 200, 1},
      {"80GB-H100-100Gbps", 80, 989, 100, 1}, {"80GB-H100-200Gbps", 80, 989, 200, 1},
  };
  const PresetCatalog& cat = builtin_catalog();
  REQUIRE(cat.clusters.size() == 8);
  for (size_t i = 0; i < 8; ++i) {
    CAPTURE(expected[i].name);
    const ClusterSpec& c = cat.clusters[i];
    CHECK(c.name == expected[i].name);
    CHECK(c.gpu_mem_bytes == expected[i].mem_gib * kGiB);
    CHECK(c.reserved_bytes == 10.0 * kGiB);
    CHECK(c.peak_flops == expected[i].peak_tflops * 1e12);
    CHECK(c.bandwidth_bps == expected[i].gbps * 1e9 / 8.0);
    CHECK(c.num_gpus == expected[i].num_gpus);
    CHECK(c.latency_s == 0.0);
  }
}

TEST_CASE("printed cluster table: eleven rows, eight unique names, one typo row") {
  const std::vector<PrintedClusterRow>& rows = printed_cluster_rows();
  REQUIRE(rows.size() == 11);
  // row 5 prints 100 Gbps under a 200 Gbps name; the preset follows the name
  CHECK(rows[4].name == "40GB-A100-200Gbps");
  CHECK(rows[4].printed_bandwidth_bps == 12.5e9);
  CHECK(builtin_catalog().cluster_or_throw(rows[4].name).bandwidth_bps == 25e9);
  // the two sized rows
  CHECK(rows[9].name == "40GB-A100-200Gbps");
  CHECK(rows[9].num_gpus == 512);
  CHECK(rows[10].name == "40GB-A100-100Gbps");
  CHECK(rows[10].num_gpus == 128);
  std::vector<std::string> names;
  for (const PrintedClusterRow& r : rows) names.push_back(r.name);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  CHECK(names.size() == 8);
  // every printed name resolves to a preset
  for (const std::string& n : names) CHECK(builtin_catalog().find_cluster(n) != nullptr);
}

TEST_CASE("lookup is case-insensitive and knows the 65b alias") {
  const PresetCatalog& cat = builtin_catalog();
  CHECK(cat.model_or_throw("13B").hidden == 5120);
  CHECK(cat.model_or_throw("65b").name == "66b");
  CHECK(cat.model_or_throw("65B").name == "66b");
  CHECK(cat.cluster_or_throw("40gb-a100-200gbps").name == "40GB-A100-200Gbps");
  CHECK(cat.find_model("12b") == nullptr);
  CHECK_THROWS_AS(cat.model_or_throw("12b"), UnknownPreset);
  CHECK_THROWS_WITH_AS(cat.model_or_throw("12b"), doctest::Contains("13b"), UnknownPreset);
  CHECK_THROWS_AS(cat.cluster_or_throw("nope"), UnknownPreset);
}

TEST_CASE("the bundled preset files reproduce the built-ins exactly") {
  const PresetCatalog from_files = load_catalog(std::string(FSDPPLAN_DATA_DIR) + "/presets");
  const PresetCatalog& builtin = builtin_catalog();
  REQUIRE(from_files.models.size() == builtin.models.size());
  REQUIRE(from_files.clusters.size() == builtin.clusters.size());
  for (const ModelSpec& b : builtin.models) {
    const ModelSpec* f = from_files.find_model(b.name);
    REQUIRE(f != nullptr);
    CHECK(f->layers == b.layers);
    CHECK(f->hidden == b.hidden);
    CHECK(f->heads == b.heads);
    CHECK(f->seq_len == b.seq_len);
    CHECK(f->bytes_per_value == b.bytes_per_value);
  }
  for (const ClusterSpec& b : builtin.clusters) {
    const ClusterSpec* f = from_files.find_cluster(b.name);
    REQUIRE(f != nullptr);
    CHECK(f->num_gpus == b.num_gpus);
    CHECK(f->gpu_mem_bytes == b.gpu_mem_bytes);
    CHECK(f->reserved_bytes == b.reserved_bytes);
    CHECK(f->peak_flops == b.peak_flops);
    CHECK(f->bandwidth_bps == b.bandwidth_bps);
    CHECK(f->latency_s == b.latency_s);
  }
}

TEST_CASE("a preset directory layers over the built-ins") {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "fsdpplan_presets_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "pico.json");
    f << R"({"name": "pico", "layers": 2, "hidden": 64, "heads": 2})";
  }
  {  // same-name override replaces the built-in
    std::ofstream f(dir / "13b_long.json");
    f << R"({"name": "13b", "layers": 40, "hidden": 5120, "heads": 40, "seq_len": 4096})";
  }
  const PresetCatalog cat = load_catalog(dir.string());
  CHECK(cat.models.size() == 8);
  CHECK(cat.model_or_throw("pico").hidden == 64);
  CHECK(cat.model_or_throw("13b").seq_len == 4096);
  CHECK(cat.clusters.size() == 8);  // untouched

  // catalog_from_env honors FSDP_PLAN_PRESETS
  setenv("FSDP_PLAN_PRESETS", dir.string().c_str(), 1);
  CHECK(catalog_from_env().model_or_throw("pico").layers == 2);
  unsetenv("FSDP_PLAN_PRESETS");
  CHECK(catalog_from_env().find_model("pico") == nullptr);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
