#pragma once

#include <string>

// Scalar parsing for config files. Numbers may use underscore separators
// ("5_120"). Suffixes are case-sensitive where ambiguity matters (Gbps vs GB)
// and whitespace between number and suffix is allowed.

namespace fsdpplan {

// "40GiB", "512MiB", "40GB" (decimal aliases map to the binary units -- the
// source tables use GB loosely for GiB), plain number = bytes
double parse_bytes(const std::string& text);

// "200Gbps" -> 25e9 (bits to bytes), "100Mbps", plain number = bytes/second
double parse_bandwidth(const std::string& text);

// "312T" -> 312e12, "989G" -> 989e9, plain number = FLOPs/second
double parse_flops(const std::string& text);

// integer, underscores allowed: "5_120" == "5120"
long long parse_count(const std::string& text);

// plain double, underscores allowed
double parse_fraction(const std::string& text);

// human-readable byte count for tables ("25.500 GiB")
std::string format_bytes(double bytes, int precision = 3);

}  // namespace fsdpplan
