#include "fsdpplan/config_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fsdpplan/units.hpp"

namespace fsdpplan {

namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json parse_document(const std::string& text, const std::string& origin) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw ParseError(origin + ": not valid JSON");
  if (!doc.is_object()) throw ParseError(origin + ": top-level value must be an object");
  return doc;
}

[[noreturn]] void field_error(const std::string& origin, const std::string& field,
                              const std::string& detail) {
  throw ParseError(origin + ": field '" + field + "': " + detail);
}

const json& require(const json& doc, const std::string& origin, const std::string& field) {
  auto it = doc.find(field);
  if (it == doc.end()) field_error(origin, field, "missing");
  return *it;
}

std::string require_string(const json& doc, const std::string& origin,
                           const std::string& field) {
  const json& v = require(doc, origin, field);
  if (!v.is_string()) field_error(origin, field, "expected a string");
  return v.get<std::string>();
}

// scalar fields accept either a JSON number or a string with a unit suffix
template <class Parse>
double scalar(const json& doc, const std::string& origin, const std::string& field,
              Parse parse) {
  const json& v = require(doc, origin, field);
  try {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse(v.get<std::string>());
  } catch (const ParseError& e) {
    field_error(origin, field, e.what());
  }
  field_error(origin, field, "expected a number or a unit string");
}

long long integer(const json& doc, const std::string& origin, const std::string& field) {
  const json& v = require(doc, origin, field);
  try {
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_string()) return parse_count(v.get<std::string>());
  } catch (const ParseError& e) {
    field_error(origin, field, e.what());
  }
  field_error(origin, field, "expected an integer or an integer string");
}

void reject_unknown(const json& doc, const std::string& origin,
                    std::initializer_list<const char*> known) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) field_error(origin, it.key(), "unknown field");
  }
}

}  // namespace

ModelSpec parse_model_json(const std::string& text, const std::string& origin) {
  const json doc = parse_document(text, origin);
  reject_unknown(doc, origin, {"name", "layers", "hidden", "heads", "seq_len", "bytes_per_value"});
  ModelSpec m;
  m.name = require_string(doc, origin, "name");
  m.layers = integer(doc, origin, "layers");
  m.hidden = integer(doc, origin, "hidden");
  m.heads = integer(doc, origin, "heads");
  if (doc.contains("seq_len")) m.seq_len = integer(doc, origin, "seq_len");
  if (doc.contains("bytes_per_value")) m.bytes_per_value = integer(doc, origin, "bytes_per_value");
  try {
    m.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(origin + ": " + e.what());
  }
  return m;
}

ClusterSpec parse_cluster_json(const std::string& text, const std::string& origin) {
  const json doc = parse_document(text, origin);
  reject_unknown(doc, origin,
                 {"name", "num_gpus", "gpu_mem", "reserved", "peak_flops", "bandwidth",
                  "latency"});
  ClusterSpec c;
  c.name = require_string(doc, origin, "name");
  if (doc.contains("num_gpus")) c.num_gpus = integer(doc, origin, "num_gpus");
  c.gpu_mem_bytes = scalar(doc, origin, "gpu_mem", parse_bytes);
  if (doc.contains("reserved")) c.reserved_bytes = scalar(doc, origin, "reserved", parse_bytes);
  c.peak_flops = scalar(doc, origin, "peak_flops", parse_flops);
  c.bandwidth_bps = scalar(doc, origin, "bandwidth", parse_bandwidth);
  if (doc.contains("latency")) c.latency_s = scalar(doc, origin, "latency", parse_fraction);
  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(origin + ": " + e.what());
  }
  return c;
}

ModelSpec load_model_config(const std::string& path) {
  return parse_model_json(read_file(path), path);
}

ClusterSpec load_cluster_config(const std::string& path) {
  return parse_cluster_json(read_file(path), path);
}

std::string serialize_model(const ModelSpec& m) {
  json doc;
  doc["name"] = m.name;
  doc["layers"] = m.layers;
  doc["hidden"] = m.hidden;
  doc["heads"] = m.heads;
  doc["seq_len"] = m.seq_len;
  doc["bytes_per_value"] = m.bytes_per_value;
  return doc.dump(2) + "\n";
}

std::string serialize_cluster(const ClusterSpec& c) {
  json doc;
  doc["name"] = c.name;
  doc["num_gpus"] = c.num_gpus;
  doc["gpu_mem"] = c.gpu_mem_bytes;
  doc["reserved"] = c.reserved_bytes;
  doc["peak_flops"] = c.peak_flops;
  doc["bandwidth"] = c.bandwidth_bps;
  doc["latency"] = c.latency_s;
  return doc.dump(2) + "\n";
}

}  // namespace fsdpplan
