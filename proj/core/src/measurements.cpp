#include "fsdpplan/measurements.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

namespace fsdpplan {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool is_oom(const std::string& cell) {
  return cell.size() == 3 && std::toupper(static_cast<unsigned char>(cell[0])) == 'O' &&
         std::toupper(static_cast<unsigned char>(cell[1])) == 'O' &&
         std::toupper(static_cast<unsigned char>(cell[2])) == 'M';
}

struct CellContext {
  const std::string& file;
  int line;
  [[noreturn]] void fail(const std::string& detail) const {
    throw ParseError(file + ":" + std::to_string(line) + ": " + detail);
  }
};

long long required_int(const CellContext& ctx, const std::string& cell, const char* column) {
  if (cell.empty()) ctx.fail(std::string("column '") + column + "' must not be empty");
  char* end = nullptr;
  const long long v = std::strtoll(cell.c_str(), &end, 10);
  if (end == cell.c_str() || *end != '\0')
    ctx.fail(std::string("column '") + column + "': cannot parse integer '" + cell + "'");
  return v;
}

// empty cell -> absent; "OOM" -> absent and flags the record
std::optional<double> optional_double(const CellContext& ctx, const std::string& cell,
                                      const char* column, bool& oom) {
  if (cell.empty()) return std::nullopt;
  if (is_oom(cell)) {
    oom = true;
    return std::nullopt;
  }
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0')
    ctx.fail(std::string("column '") + column + "': cannot parse number '" + cell + "'");
  return v;
}

void check_record(const CellContext& ctx, const MeasurementRecord& r) {
  if (r.num_gpus < 1) ctx.fail("num_gpus must be >= 1");
  if (r.context_length < 1) ctx.fail("context_length must be >= 1");
  if (r.batch_size < 1) ctx.fail("batch_size must be >= 1");
  if (r.tokens_per_batch != r.context_length * r.batch_size)
    ctx.fail("tokens_per_batch " + std::to_string(r.tokens_per_batch) +
             " != context_length * batch_size (" +
             std::to_string(r.context_length * r.batch_size) + ")");
  if (r.mfu && !(*r.mfu > 0.0 && *r.mfu < 1.0))
    ctx.fail("mfu " + std::to_string(*r.mfu) + " outside (0,1)");
  if (r.throughput_tgs && !(*r.throughput_tgs > 0.0))
    ctx.fail("throughput_tgs must be positive");
  if (r.activate_mem_gib && !(*r.activate_mem_gib > 0.0))
    ctx.fail("activate_mem_gib must be positive");
  if (r.reserved_mem_gib && !(*r.reserved_mem_gib > 0.0))
    ctx.fail("reserved_mem_gib must be positive");
}

void verify_manifest(const std::filesystem::path& csv_path) {
  const std::filesystem::path manifest_path = csv_path.parent_path() / "manifest.json";
  if (!std::filesystem::exists(manifest_path)) return;

  std::ifstream in(manifest_path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc = nlohmann::json::parse(buf.str(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("files"))
    throw ParseError(manifest_path.string() + ": expected an object with a 'files' map");

  const std::string name = csv_path.filename().string();
  const auto& files = doc["files"];
  if (!files.contains(name))
    throw ValidationError(manifest_path.string() + ": '" + name + "' is not listed");
  const std::string want = files[name].get<std::string>();
  std::ostringstream got;
  got << std::hex << std::setw(16) << std::setfill('0') << fnv1a64_file(csv_path.string());
  if (got.str() != want)
    throw ValidationError(csv_path.string() + ": checksum mismatch (manifest " + want +
                          ", file " + got.str() + ")");
}

}  // namespace

uint64_t fnv1a64(const void* data, size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  uint64_t hash = 14695981039346656037ULL;
  for (size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 1099511628211ULL;
  }
  return hash;
}

uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();
  return fnv1a64(data.data(), data.size());
}

std::vector<MeasurementRecord> load_measurements(const std::string& path) {
  verify_manifest(path);

  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open measurement file '" + path + "'");

  static const std::vector<std::string> kColumns = {
      "model",          "cluster",          "num_gpus", "context_length",
      "batch_size",     "tokens_per_batch", "activate_mem_gib",
      "reserved_mem_gib", "mfu",            "throughput_tgs", "empty_cache"};

  std::vector<MeasurementRecord> records;
  std::map<std::string, size_t> col;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const CellContext ctx{path, line_no};
    const std::vector<std::string> cells = split_csv(line);

    if (col.empty()) {  // first non-comment line is the header
      for (size_t i = 0; i < cells.size(); ++i) {
        if (std::find(kColumns.begin(), kColumns.end(), cells[i]) == kColumns.end())
          ctx.fail("unknown column '" + cells[i] + "'");
        col[cells[i]] = i;
      }
      for (const std::string& want : kColumns)
        if (!col.count(want)) ctx.fail("missing column '" + want + "'");
      continue;
    }

    if (cells.size() != col.size())
      ctx.fail("expected " + std::to_string(col.size()) + " cells, got " +
               std::to_string(cells.size()));
    MeasurementRecord r;
    r.source_file = path;
    r.source_line = line_no;
    r.model_name = cells[col["model"]];
    r.cluster_name = cells[col["cluster"]];
    if (r.model_name.empty()) ctx.fail("column 'model' must not be empty");
    if (r.cluster_name.empty()) ctx.fail("column 'cluster' must not be empty");
    r.num_gpus = required_int(ctx, cells[col["num_gpus"]], "num_gpus");
    r.context_length = required_int(ctx, cells[col["context_length"]], "context_length");
    r.batch_size = required_int(ctx, cells[col["batch_size"]], "batch_size");
    r.tokens_per_batch = required_int(ctx, cells[col["tokens_per_batch"]], "tokens_per_batch");
    r.activate_mem_gib = optional_double(ctx, cells[col["activate_mem_gib"]], "activate_mem_gib", r.oom);
    r.reserved_mem_gib = optional_double(ctx, cells[col["reserved_mem_gib"]], "reserved_mem_gib", r.oom);
    bool mfu_oom = false, tgs_oom = false;
    r.mfu = optional_double(ctx, cells[col["mfu"]], "mfu", mfu_oom);
    r.throughput_tgs = optional_double(ctx, cells[col["throughput_tgs"]], "throughput_tgs", tgs_oom);
    r.oom = r.oom || mfu_oom || tgs_oom;
    const std::string& cache_cell = cells[col["empty_cache"]];
    if (cache_cell == "Y" || cache_cell == "y")
      r.empty_cache = true;
    else if (cache_cell == "N" || cache_cell == "n" || cache_cell.empty())
      r.empty_cache = false;
    else
      ctx.fail("column 'empty_cache': expected Y or N, got '" + cache_cell + "'");
    check_record(ctx, r);
    records.push_back(std::move(r));
  }
  if (col.empty()) throw ParseError(path + ": no header line found");
  return records;
}

std::vector<MeasurementRecord> load_measurements_dir(const std::string& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<MeasurementRecord> all;
  for (const auto& f : files) {
    std::vector<MeasurementRecord> part = load_measurements(f.string());
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return all;
}

ValidationReport validate_against_measurements(const std::vector<MeasurementRecord>& records,
                                               const PresetCatalog& catalog, double tolerance,
                                               const GridParams& grid) {
  GridParams theory_grid = grid;
  theory_grid.objective = Objective::MaxMFU;
  theory_grid.validate();

  ValidationReport report;
  report.tolerance = tolerance;
  // the same (model, cluster, N, context) tuple recurs across files
  std::map<std::tuple<std::string, std::string, long long, long long>, double> cache;

  for (const MeasurementRecord& rec : records) {
    ValidationRow row;
    row.record = rec;
    if (rec.oom || !rec.mfu) {
      row.skipped = true;
      row.note = rec.oom ? "ran out of GPU memory" : "no measured MFU";
      ++report.skipped_count;
      report.rows.push_back(std::move(row));
      continue;
    }

    const ModelSpec model = catalog.model_or_throw(rec.model_name);
    ClusterSpec cluster = catalog.cluster_or_throw(rec.cluster_name);
    cluster.num_gpus = rec.num_gpus;

    const auto key = std::make_tuple(model.name, cluster.name, rec.num_gpus, rec.context_length);
    auto it = cache.find(key);
    if (it == cache.end()) {
      double theory = 0;
      try {
        theory = grid_search(model, cluster, theory_grid, rec.context_length).best_estimate.mfu;
      } catch (const NoFeasibleConfig&) {
        theory = 0;  // measured success where theory says impossible: flag below
      }
      it = cache.emplace(key, theory).first;
    }
    row.theory_mfu = it->second;
    if (row.theory_mfu <= 0) {
      row.flagged = true;
      row.note = "no feasible configuration in theory, yet the run succeeded";
    } else {
      row.ratio = *rec.mfu / row.theory_mfu;
      row.flagged = *rec.mfu > row.theory_mfu * (1.0 + tolerance);
      if (row.flagged) row.note = "measured MFU exceeds the theoretical bound";
    }
    ++report.checked_count;
    if (row.flagged) ++report.flagged_count;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace fsdpplan
