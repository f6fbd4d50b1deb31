#include "fsdpplan/presets.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fsdpplan/config_io.hpp"

namespace fsdpplan {

namespace {

std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

ModelSpec model(const char* name, long long layers, long long hidden, long long heads) {
  ModelSpec m;
  m.name = name;
  m.layers = layers;
  m.hidden = hidden;
  m.heads = heads;
  return m;  // seq_len 2048 and bf16 come from the struct defaults
}

ClusterSpec cluster(const char* name, double mem_gib, double peak_flops, double gbps,
                    long long num_gpus) {
  ClusterSpec c;
  c.name = name;
  c.num_gpus = num_gpus;
  c.gpu_mem_bytes = mem_gib * kGiB;
  c.reserved_bytes = 10.0 * kGiB;  // uniform framework/fragmentation reserve
  c.peak_flops = peak_flops;
  c.bandwidth_bps = gbps * 1e9 / 8.0;  // network Gbps, bits to bytes
  c.latency_s = 0.0;
  return c;
}

PresetCatalog make_builtin() {
  PresetCatalog cat;
  // hidden size 4086 for 7b is carried over verbatim from the source tables
  cat.models = {
      model("1.3b", 24, 2048, 16),  model("7b", 32, 4086, 32),
      model("13b", 40, 5120, 40),   model("30b", 60, 6656, 64),
      model("66b", 80, 8192, 64),   model("175b", 96, 12288, 96),
      model("310b", 96, 16384, 128),
  };
  // peak dense half-precision FLOP rates are vendor datasheet values; the
  // GPU counts on the two 40GB A100 clusters are the published cluster sizes
  cat.clusters = {
      cluster("16GB-V100-100Gbps", 16, 125e12, 100, 1),
      cluster("16GB-V100-200Gbps", 16, 125e12, 200, 1),
      cluster("40GB-A100-100Gbps", 40, 312e12, 100, 128),
      cluster("40GB-A100-200Gbps", 40, 312e12, 200, 512),
      cluster("80GB-A100-100Gbps", 80, 312e12, 100, 1),
      cluster("80GB-A100-200Gbps", 80, 312e12, 200, 1),
      cluster("80GB-H100-100Gbps", 80, 989e12, 100, 1),
      cluster("80GB-H100-200Gbps", 80, 989e12, 200, 1),
  };
  return cat;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open preset file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

const ModelSpec* PresetCatalog::find_model(const std::string& name) const {
  std::string key = lower(name);
  if (key == "65b") key = "66b";  // the source tables use both names for one model
  for (const ModelSpec& m : models)
    if (lower(m.name) == key) return &m;
  return nullptr;
}

const ClusterSpec* PresetCatalog::find_cluster(const std::string& name) const {
  const std::string key = lower(name);
  for (const ClusterSpec& c : clusters)
    if (lower(c.name) == key) return &c;
  return nullptr;
}

ModelSpec PresetCatalog::model_or_throw(const std::string& name) const {
  if (const ModelSpec* m = find_model(name)) return *m;
  std::string known;
  for (const ModelSpec& m : models) known += (known.empty() ? "" : ", ") + m.name;
  throw UnknownPreset("unknown model preset '" + name + "' (known: " + known + ")");
}

ClusterSpec PresetCatalog::cluster_or_throw(const std::string& name) const {
  if (const ClusterSpec* c = find_cluster(name)) return *c;
  std::string known;
  for (const ClusterSpec& c : clusters) known += (known.empty() ? "" : ", ") + c.name;
  throw UnknownPreset("unknown cluster preset '" + name + "' (known: " + known + ")");
}

const PresetCatalog& builtin_catalog() {
  static const PresetCatalog cat = make_builtin();
  return cat;
}

PresetCatalog load_catalog(const std::string& preset_dir) {
  PresetCatalog cat = builtin_catalog();
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(preset_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  for (const auto& path : files) {
    const std::string text = read_file(path);
    // model files carry "layers", cluster files carry "gpu_mem"
    if (text.find("\"layers\"") != std::string::npos) {
      ModelSpec m = parse_model_json(text, path.string());
      auto it = std::find_if(cat.models.begin(), cat.models.end(), [&](const ModelSpec& x) {
        return lower(x.name) == lower(m.name);
      });
      if (it != cat.models.end())
        *it = m;
      else
        cat.models.push_back(m);
    } else {
      ClusterSpec c = parse_cluster_json(text, path.string());
      auto it = std::find_if(cat.clusters.begin(), cat.clusters.end(), [&](const ClusterSpec& x) {
        return lower(x.name) == lower(c.name);
      });
      if (it != cat.clusters.end())
        *it = c;
      else
        cat.clusters.push_back(c);
    }
  }
  return cat;
}

PresetCatalog catalog_from_env() {
  if (const char* dir = std::getenv("FSDP_PLAN_PRESETS"); dir && *dir)
    return load_catalog(dir);
  return builtin_catalog();
}

const std::vector<PrintedClusterRow>& printed_cluster_rows() {
  static const std::vector<PrintedClusterRow> rows = {
      {"16GB-V100-100Gbps", 100e9 / 8.0, 0},
      {"40GB-A100-100Gbps", 100e9 / 8.0, 0},
      {"80GB-A100-100Gbps", 100e9 / 8.0, 0},
      {"80GB-H100-100Gbps", 100e9 / 8.0, 0},
      {"40GB-A100-200Gbps", 100e9 / 8.0, 0},  // printed average disagrees with the name
      {"16GB-V100-200Gbps", 200e9 / 8.0, 0},
      {"40GB-A100-200Gbps", 200e9 / 8.0, 0},
      {"80GB-A100-200Gbps", 200e9 / 8.0, 0},
      {"80GB-H100-200Gbps", 200e9 / 8.0, 0},
      {"40GB-A100-200Gbps", 200e9 / 8.0, 512},
      {"40GB-A100-100Gbps", 100e9 / 8.0, 128},
  };
  return rows;
}

}  // namespace fsdpplan
