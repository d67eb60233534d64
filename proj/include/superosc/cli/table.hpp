#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace superosc::cli {

/// A numeric table with a fixed header.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
};

/// Scientific notation with `precision` significant digits; NaN prints as "nan".
std::string format_number(double v, int precision);

void write_csv(std::ostream& out, const Table& table, int precision);
/// {"meta": ..., "rows": [{column: value}, ...]}; non-finite values become null.
void write_json(std::ostream& out, const Table& table, const nlohmann::json& meta);

}  // namespace superosc::cli
