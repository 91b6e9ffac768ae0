#ifndef INFOCRIT_CSV_HPP
#define INFOCRIT_CSV_HPP

// Comma-delimited text I/O for draw matrices and small data tables.
//
// Matrix format: optional single header row `point_1,...,point_n`, then one
// row per posterior draw. Rows and columns in error messages are 1-based
// file coordinates.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "infocrit/draws.hpp"
#include "infocrit/errors.hpp"

namespace infocrit::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // file line of each row
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const auto cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    cells.emplace_back(trim(cell));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

/// Parses a decimal float, accepting inf/nan spellings so the caller can
/// tell a non-finite value apart from garbage.
inline bool try_parse(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

}  // namespace detail

/// Splits a stream into non-empty lines of cells. No quoting support: the
/// formats handled here never contain embedded commas.
inline std::vector<std::pair<std::size_t, std::vector<std::string>>> read_lines(std::istream& in) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (lineno == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (detail::trim(view).empty()) continue;
    lines.emplace_back(lineno, detail::split(view));
  }
  return lines;
}

inline double parse_number(const std::string& cell, std::size_t row, std::size_t col) {
  if (cell.empty()) throw InputFormatError("missing cell", row, col);
  double v = 0.0;
  if (!detail::try_parse(cell, v)) throw InputFormatError("unparsable number '" + cell + "'", row, col);
  return v;
}

/// Reads a draws x points matrix. Throws InputFormatError on shape or parse
/// problems and NumericError on NaN/inf entries.
inline LogLikMatrix read_matrix(std::istream& in) {
  auto lines = read_lines(in);
  if (lines.empty()) throw InputFormatError("empty matrix file");

  std::size_t first_data = 0;
  std::size_t width = lines.front().second.size();
  {
    const auto& [lineno, cells] = lines.front();
    bool numeric = true;
    for (const auto& c : cells) {
      double v;
      if (!detail::try_parse(c, v)) numeric = false;
    }
    if (!numeric) {
      for (std::size_t j = 0; j < cells.size(); ++j) {
        if (cells[j] != "point_" + std::to_string(j + 1)) {
          throw InputFormatError("header mismatch: expected 'point_" + std::to_string(j + 1) +
                                     "', found '" + cells[j] + "'",
                                 lineno, j + 1);
        }
      }
      first_data = 1;
    }
  }
  if (first_data >= lines.size()) throw InputFormatError("matrix file has no draw rows");

  std::vector<std::vector<double>> rows;
  rows.reserve(lines.size() - first_data);
  for (std::size_t r = first_data; r < lines.size(); ++r) {
    const auto& [lineno, cells] = lines[r];
    if (cells.size() != width) {
      throw InputFormatError("expected " + std::to_string(width) + " cells, found " +
                                 std::to_string(cells.size()),
                             lineno, std::min(cells.size(), width) + 1);
    }
    std::vector<double> row(width);
    for (std::size_t j = 0; j < width; ++j) {
      row[j] = parse_number(cells[j], lineno, j + 1);
      if (!std::isfinite(row[j])) {
        throw NumericError("non-finite log density at row " + std::to_string(lineno) +
                           ", column " + std::to_string(j + 1));
      }
    }
    rows.push_back(std::move(row));
  }
  return LogLikMatrix::from_rows(rows);
}

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Writes with a header row; values use the shortest round-trip form.
inline void write_matrix(std::ostream& out, const LogLikMatrix& m) {
  for (std::size_t i = 0; i < m.points(); ++i) {
    out << (i ? "," : "") << "point_" << (i + 1);
  }
  out << '\n';
  for (std::size_t s = 0; s < m.draws(); ++s) {
    for (std::size_t i = 0; i < m.points(); ++i) out << (i ? "," : "") << format_double(m(s, i));
    out << '\n';
  }
}

/// Reads a table whose first row names the columns; checks that `required`
/// are present and that every row has the header's width.
inline Table read_table(std::istream& in, const std::vector<std::string>& required) {
  auto lines = read_lines(in);
  if (lines.empty()) throw InputFormatError("empty data file");
  Table t;
  t.header = lines.front().second;
  for (const auto& name : required) {
    bool found = false;
    for (const auto& h : t.header) found = found || h == name;
    if (!found) throw InputFormatError("missing column '" + name + "'", lines.front().first, 1);
  }
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto& [lineno, cells] = lines[r];
    if (cells.size() != t.header.size()) {
      throw InputFormatError("expected " + std::to_string(t.header.size()) + " cells, found " +
                                 std::to_string(cells.size()),
                             lineno, std::min(cells.size(), t.header.size()) + 1);
    }
    t.rows.push_back(std::move(cells));
    t.line_numbers.push_back(lineno);
  }
  if (t.rows.empty()) throw InputFormatError("data file has no rows");
  return t;
}

/// Numeric column of a table read with read_table.
inline std::vector<double> numeric_column(const Table& t, const std::string& name) {
  std::size_t idx = 0;
  while (idx < t.header.size() && t.header[idx] != name) ++idx;
  if (idx == t.header.size()) throw InputFormatError("missing column '" + name + "'");
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double v = parse_number(t.rows[r][idx], t.line_numbers[r], idx + 1);
    if (!std::isfinite(v)) {
      throw NumericError("non-finite value in column '" + name + "' at row " +
                         std::to_string(t.line_numbers[r]));
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace infocrit::csv

#endif  // INFOCRIT_CSV_HPP
