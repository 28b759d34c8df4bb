#include "flqkd/report.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

#include "flqkd/config.hpp"
#include "flqkd/errors.hpp"

namespace flqkd {

namespace {

void require_finite(const Table& t) {
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (const double* d = std::get_if<double>(&row[c]); d && !std::isfinite(*d)) {
        throw NumericInvariantError("non-finite value in column " + t.columns[c]);
      }
    }
  }
}

std::string csv_cell(const Cell& cell) {
  struct {
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + '"';
    }
  } visit;
  return std::visit(visit, cell);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw NumericInvariantError("row width does not match header");
  rows.push_back(std::move(row));
}

void write_csv(std::ostream& os, const Table& t) {
  require_finite(t);
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
    os << '\n';
  }
}

void write_jsonl(std::ostream& os, const Table& t) {
  require_finite(t);
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::visit([&](const auto& v) { obj[t.columns[c]] = v; }, row[c]);
    }
    os << obj.dump() << '\n';
  }
}

}  // namespace flqkd
