#include "magicpol/table.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "magicpol/errors.hpp"

namespace magicpol {

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ValidationError("table has no column '" + name + "'");
}

Eigen::VectorXd Table::column(const std::string& name) const {
  const auto k = column_index(name);
  Eigen::VectorXd v(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    try {
      v(i) = parse_number(rows[i][k]);
    } catch (const ValidationError& e) {
      throw ParseError("table", static_cast<int>(i) + 1, "column '" + name + "': " + e.what());
    }
  }
  return v;
}

void Table::add_row(const std::vector<double>& row) {
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (double x : row) cells.push_back(format_number(x));
  add_cells(std::move(cells));
}

void Table::add_cells(std::vector<std::string> cells) {
  if (cells.size() != columns.size()) throw ValidationError("table row width does not match header");
  rows.push_back(std::move(cells));
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

double parse_number(const std::string& s) {
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  auto [p, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    throw ValidationError("not a number: '" + s + "'");
  return v;
}

Table read_csv(std::istream& in, const std::string& source) {
  Table t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.front() == '#') {
      t.comments.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    auto cells = split(line);
    if (t.columns.empty()) {
      for (const auto& c : cells)
        if (c.empty()) throw ParseError(source, lineno, "empty column name");
      t.columns = std::move(cells);
      continue;
    }
    if (cells.size() != t.columns.size())
      throw ParseError(source, lineno, fmt::format("expected {} fields, found {}", t.columns.size(), cells.size()));
    t.rows.push_back(std::move(cells));
  }
  if (t.columns.empty()) throw ParseError(source, lineno, "missing header row");
  return t;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // no "-0"
  return fmt::format("{:.12g}", x);
}

void write_csv(std::ostream& out, const Table& t) {
  for (const auto& c : t.comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << '\n';
  }
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace magicpol
