#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace magicpol {

/// CSV with '#' comment lines and one header row. Cells are kept as text.
struct Table {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;  // cells as written

  std::size_t column_index(const std::string& name) const;  // throws ValidationError
  /// Parses a column as numbers; throws ParseError naming the row.
  Eigen::VectorXd column(const std::string& name) const;
  void add_row(const std::vector<double>& row);
  void add_cells(std::vector<std::string> cells);
};

/// Throws ParseError on malformed input (ragged rows, missing header).
Table read_csv(std::istream& in, const std::string& source = "<stream>");
void write_csv(std::ostream& out, const Table& t);

/// 12 significant digits, C locale; "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double x);
double parse_number(const std::string& s);  // throws ValidationError

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace magicpol
