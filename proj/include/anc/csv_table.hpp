#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace anc {

using Cell = std::variant<double, std::int64_t, std::string>;

/// A result table as written to disk: `# key=value` provenance lines, one
/// header line, then comma-separated rows. Doubles print with 12 significant
/// digits; infinities and NaNs print as an empty field.
struct Table {
  std::vector<std::pair<std::string, std::string>> provenance;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Index of a named column; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
  /// Numeric value of a cell, NaN for the empty sentinel or a string.
  double number(std::size_t row, const std::string& name) const;
};

std::string format_number(double value);
std::string format_cell(const Cell& cell);

void write_csv(std::ostream& out, const Table& table);
std::string to_csv(const Table& table);

/// Minimal SVG line chart of every numeric column against the first column.
void write_svg_plot(std::ostream& out, const Table& table, const std::string& title);

}  // namespace anc
