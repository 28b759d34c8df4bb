#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace flqkd {

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// Header plus one line per row. Doubles use the shortest round-trip form;
/// a non-finite double throws NumericInvariantError.
void write_csv(std::ostream& os, const Table& t);

/// One JSON object per row, keys in column order.
void write_jsonl(std::ostream& os, const Table& t);

}  // namespace flqkd
