#include "superosc/cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace superosc::cli {

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw std::logic_error("row has " + std::to_string(row.size()) + " values for " +
                           std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

std::string format_number(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", precision - 1, v);
  return buf;
}

void write_csv(std::ostream& out, const Table& table, int precision) {
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i], precision);
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table, const nlohmann::json& meta) {
  using ordered = nlohmann::ordered_json;
  ordered rows = ordered::array();
  for (const auto& row : table.rows) {
    ordered rec = ordered::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      rec[table.columns[i]] = std::isfinite(row[i]) ? ordered(row[i]) : ordered();
    rows.push_back(std::move(rec));
  }
  ordered doc = ordered::object();
  doc["meta"] = ordered::parse(meta.dump());
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

}  // namespace superosc::cli
