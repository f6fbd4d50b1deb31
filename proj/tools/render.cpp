#include "render.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fsdpplan/types.hpp"

namespace fsdpplan::cli {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json to_json(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<long long>(&v)) return *i;
  return std::get<bool>(v);
}

std::string render_table_format(const Document& doc, int precision) {
  std::ostringstream out;
  bool first = true;
  for (const KvSection& sec : doc.sections) {
    if (!first) out << '\n';
    first = false;
    out << sec.name << '\n';
    size_t width = 0;
    for (const auto& [key, value] : sec.items) width = std::max(width, key.size());
    for (const auto& [key, value] : sec.items) {
      out << "  " << key << std::string(width - key.size() + 2, ' ')
          << format_value(value, precision) << '\n';
    }
  }
  if (doc.table) {
    if (!first) out << '\n';
    if (!doc.table->name.empty()) out << doc.table->name << '\n';
    const size_t ncols = doc.table->columns.size();
    std::vector<size_t> width(ncols);
    std::vector<std::vector<std::string>> cells;
    cells.reserve(doc.table->rows.size());
    for (size_t i = 0; i < ncols; ++i) width[i] = doc.table->columns[i].size();
    for (const auto& row : doc.table->rows) {
      std::vector<std::string> line;
      line.reserve(ncols);
      for (size_t i = 0; i < ncols; ++i) {
        line.push_back(format_value(row[i], precision));
        width[i] = std::max(width[i], line.back().size());
      }
      cells.push_back(std::move(line));
    }
    auto emit = [&](const std::vector<std::string>& line) {
      for (size_t i = 0; i < ncols; ++i) {
        out << line[i];
        if (i + 1 < ncols) out << std::string(width[i] - line[i].size() + 2, ' ');
      }
      out << '\n';
    };
    emit(doc.table->columns);
    for (size_t i = 0; i < ncols; ++i)
      out << std::string(width[i], '-') << (i + 1 < ncols ? "  " : "\n");
    for (const auto& line : cells) emit(line);
  }
  return out.str();
}

std::string render_csv(const Document& doc, int precision) {
  std::ostringstream out;
  auto emit_row = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i)
      out << csv_escape(cells[i]) << (i + 1 < cells.size() ? "," : "\n");
  };
  if (doc.table) {
    emit_row(doc.table->columns);
    for (const auto& row : doc.table->rows) {
      std::vector<std::string> cells;
      cells.reserve(row.size());
      for (const Value& v : row) cells.push_back(format_value(v, precision));
      emit_row(cells);
    }
  } else {
    std::vector<std::string> header, row;
    for (const KvSection& sec : doc.sections) {
      for (const auto& [key, value] : sec.items) {
        header.push_back(sec.name + "." + key);
        row.push_back(format_value(value, precision));
      }
    }
    emit_row(header);
    emit_row(row);
  }
  return out.str();
}

std::string render_json(const Document& doc) {
  nlohmann::ordered_json root;
  for (const KvSection& sec : doc.sections) {
    nlohmann::ordered_json obj;
    for (const auto& [key, value] : sec.items) obj[key] = to_json(value);
    root[sec.name] = std::move(obj);
  }
  if (doc.table) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : doc.table->rows) {
      nlohmann::ordered_json obj;
      for (size_t i = 0; i < row.size(); ++i) obj[doc.table->columns[i]] = to_json(row[i]);
      rows.push_back(std::move(obj));
    }
    root[doc.table->name.empty() ? "rows" : doc.table->name] = std::move(rows);
  }
  return root.dump(2) + "\n";
}

}  // namespace

Format format_from_string(const std::string& s) {
  if (s == "table") return Format::Table;
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ParseError("unknown format '" + s + "' (expected table, csv, or json)");
}

std::string format_value(const Value& v, int precision) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "yes" : "no";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(precision);
  os << std::get<double>(v);
  return os.str();
}

std::string render(const Document& doc, Format format, int precision) {
  switch (format) {
    case Format::Csv: return render_csv(doc, precision);
    case Format::Json: return render_json(doc);
    default: return render_table_format(doc, precision);
  }
}

}  // namespace fsdpplan::cli
