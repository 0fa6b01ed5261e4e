#pragma once

// Tabular reports and their CSV / JSON encodings. Both encodings are pure
// functions of the report, so identical configs give identical bytes.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "gribov/cli/config.hpp"

namespace gribov::cli {

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Column {
  std::string name;
  std::string description;
};

struct Report {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw InvalidArgument("Report: row width mismatch");
    rows.push_back(std::move(row));
  }
};

namespace detail {

/// 17 significant digits; non-finite values as nan / inf / -inf.
inline std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

inline std::string csv_cell(const Cell& c) {
  struct {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return csv_number(v); }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string q = "\"";
      for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  } visit;
  return std::visit(visit, c);
}

inline nlohmann::ordered_json json_cell(const Cell& c) {
  struct {
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      if (std::isfinite(v)) return v;
      return nullptr;
    }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
  } visit;
  return std::visit(visit, c);
}

}  // namespace detail

inline nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : describe_config(c)) j[k] = v;
  return j;
}

/// Comment lines carry the schema version, the resolved config and the
/// diagnostics; then a header row and one line per row.
inline void write_csv(std::ostream& out, const RunConfig& c, const Report& r) {
  out << "# schema_version: " << kSchemaVersion << '\n';
  for (const auto& [k, v] : describe_config(c)) out << "# config." << k << " = " << v << '\n';
  for (const auto& [k, v] : r.diagnostics.items()) out << "# diagnostics." << k << " = " << v.dump() << '\n';
  for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << r.columns[i].name;
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << detail::csv_cell(row[i]);
    out << '\n';
  }
}

inline void write_json(std::ostream& out, const RunConfig& c, const Report& r) {
  nlohmann::ordered_json doc;
  doc["config"] = config_json(c);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[r.columns[i].name] = detail::json_cell(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  nlohmann::ordered_json diag = nlohmann::ordered_json::object();
  diag["schema_version"] = kSchemaVersion;
  for (const auto& [k, v] : r.diagnostics.items()) diag[k] = v;
  doc["diagnostics"] = std::move(diag);
  out << doc.dump(2) << '\n';
}

inline void write_report(std::ostream& out, const RunConfig& c, const Report& r) {
  if (c.format == OutputFormat::csv)
    write_csv(out, c, r);
  else
    write_json(out, c, r);
}

}  // namespace gribov::cli
