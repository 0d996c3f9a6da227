#pragma once

#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace subpois::cli {

using Cell = std::variant<double, long long, std::string>;

/// Row-major result table serialized as CSV or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Free-form key/value metadata emitted in the JSON block.
  std::map<std::string, std::string> metadata;

  void add_row(std::vector<Cell> row);
};

/// 12 significant digits, locale independent ("inf", "-inf", "nan" for
/// non-finite values).
std::string format_number(double v);

void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, std::ostream& out);

}  // namespace subpois::cli
