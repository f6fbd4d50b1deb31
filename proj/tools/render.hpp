#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

// Output shaping for the CLI. Every command builds one Document; the three
// renderers (table, csv, json) consume the same Values, so the formats can
// never disagree beyond representation. Doubles render at the requested
// precision in table/csv and at full precision in json.

namespace fsdpplan::cli {

enum class Format { Table, Csv, Json };
Format format_from_string(const std::string& s);  // throws ParseError

using Value = std::variant<std::string, double, long long, bool>;

struct KvSection {
  std::string name;
  std::vector<std::pair<std::string, Value>> items;
};

struct TableSection {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
};

struct Document {
  std::vector<KvSection> sections;
  std::optional<TableSection> table;
};

// table/csv text form of one value
std::string format_value(const Value& v, int precision);

// csv renders only the table when one exists, the flattened kv row otherwise
std::string render(const Document& doc, Format format, int precision);

}  // namespace fsdpplan::cli
