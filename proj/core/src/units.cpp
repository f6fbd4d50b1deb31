#include "fsdpplan/units.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <utility>
#include <vector>

#include "fsdpplan/types.hpp"

namespace fsdpplan {

namespace {

// strips surrounding whitespace and digit-group underscores ("5_120")
std::string normalize(const std::string& text) {
  size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  std::string out;
  out.reserve(e - b);
  for (size_t i = b; i < e; ++i)
    if (text[i] != '_') out.push_back(text[i]);
  return out;
}

// splits "312 T" / "40GiB" into numeric prefix and suffix
std::pair<double, std::string> split_number(const std::string& text, const char* what) {
  const std::string s = normalize(text);
  if (s.empty()) throw ParseError(std::string("empty ") + what + " value");
  const char* begin = s.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin) throw ParseError(std::string("cannot parse ") + what + " value '" + text + "'");
  std::string suffix(end);
  size_t b = 0;
  while (b < suffix.size() && std::isspace(static_cast<unsigned char>(suffix[b]))) ++b;
  suffix.erase(0, b);
  return {value, suffix};
}

[[noreturn]] void bad_suffix(const char* what, const std::string& text) {
  throw ParseError(std::string("unknown ") + what + " suffix in '" + text + "'");
}

}  // namespace

double parse_bytes(const std::string& text) {
  auto [value, suffix] = split_number(text, "byte size");
  if (value < 0) throw ParseError("byte size must be non-negative: '" + text + "'");
  static const std::vector<std::pair<std::string, double>> units = {
      {"", 1.0},           {"B", 1.0},
      {"K", 1024.0},       {"KB", 1024.0},       {"KiB", 1024.0},
      {"M", 1048576.0},    {"MB", 1048576.0},    {"MiB", 1048576.0},
      {"G", kGiB},         {"GB", kGiB},         {"GiB", kGiB},
      {"T", 1024.0 * kGiB}, {"TB", 1024.0 * kGiB}, {"TiB", 1024.0 * kGiB},
  };
  for (const auto& [name, mult] : units)
    if (suffix == name) return value * mult;
  bad_suffix("byte-size", text);
}

double parse_bandwidth(const std::string& text) {
  auto [value, suffix] = split_number(text, "bandwidth");
  if (value <= 0) throw ParseError("bandwidth must be positive: '" + text + "'");
  // network convention: bits and bytes per second scale decimally
  static const std::vector<std::pair<std::string, double>> units = {
      {"", 1.0},
      {"bps", 1.0 / 8.0}, {"Kbps", 1e3 / 8.0}, {"Mbps", 1e6 / 8.0},
      {"Gbps", 1e9 / 8.0}, {"Tbps", 1e12 / 8.0},
      {"B/s", 1.0}, {"KB/s", 1e3}, {"MB/s", 1e6}, {"GB/s", 1e9}, {"TB/s", 1e12},
  };
  for (const auto& [name, mult] : units)
    if (suffix == name) return value * mult;
  bad_suffix("bandwidth", text);
}

double parse_flops(const std::string& text) {
  auto [value, suffix] = split_number(text, "FLOP rate");
  if (value <= 0) throw ParseError("FLOP rate must be positive: '" + text + "'");
  static const std::vector<std::pair<std::string, double>> units = {
      {"", 1.0},    {"K", 1e3},  {"M", 1e6},  {"G", 1e9},
      {"T", 1e12},  {"P", 1e15}, {"E", 1e18},
  };
  for (const auto& [name, mult] : units)
    if (suffix == name) return value * mult;
  bad_suffix("FLOP-rate", text);
}

long long parse_count(const std::string& text) {
  const std::string s = normalize(text);
  if (s.empty()) throw ParseError("empty count value");
  const char* begin = s.c_str();
  char* end = nullptr;
  const long long value = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw ParseError("cannot parse count '" + text + "' (expected an integer)");
  return value;
}

double parse_fraction(const std::string& text) {
  auto [value, suffix] = split_number(text, "fraction");
  if (!suffix.empty()) bad_suffix("fraction", text);
  return value;
}

std::string format_bytes(double bytes, int precision) {
  const char* unit = "B";
  double scaled = bytes;
  const double mag = std::fabs(bytes);
  if (mag >= kGiB) {
    unit = "GiB";
    scaled = bytes / kGiB;
  } else if (mag >= 1048576.0) {
    unit = "MiB";
    scaled = bytes / 1048576.0;
  } else if (mag >= 1024.0) {
    unit = "KiB";
    scaled = bytes / 1024.0;
  }
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(precision);
  os << scaled << ' ' << unit;
  return os.str();
}

}  // namespace fsdpplan
