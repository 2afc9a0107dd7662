#include "anc/csv_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace anc {

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column named " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, const std::string& name) const {
  const Cell& cell = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  return std::numeric_limits<double>::quiet_NaN();
}

std::string format_number(double value) {
  if (!std::isfinite(value)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string format_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

void write_csv(std::ostream& out, const Table& table) {
  for (const auto& [key, value] : table.provenance) out << "# " << key << '=' << value << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

std::string to_csv(const Table& table) {
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

void write_svg_plot(std::ostream& out, const Table& table, const std::string& title) {
  constexpr double kWidth = 640, kHeight = 400, kMargin = 50;
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                            "#ff7f0e", "#8c564b", "#17becf"};

  std::vector<std::size_t> series;
  for (std::size_t c = 1; c < table.columns.size(); ++c) {
    bool numeric = !table.rows.empty();
    for (const auto& row : table.rows) numeric = numeric && std::holds_alternative<double>(row[c]);
    if (numeric) series.push_back(c);
  }

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  auto value = [&](std::size_t r, std::size_t c) {
    const Cell& cell = table.rows[r][c];
    if (const auto* d = std::get_if<double>(&cell)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
    return std::numeric_limits<double>::quiet_NaN();
  };
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double x = value(r, 0);
    if (std::isfinite(x)) x_lo = std::min(x_lo, x), x_hi = std::max(x_hi, x);
    for (std::size_t c : series) {
      const double y = value(r, c);
      if (std::isfinite(y)) y_lo = std::min(y_lo, y), y_hi = std::max(y_hi, y);
    }
  }
  if (!(x_hi > x_lo)) x_lo -= 0.5, x_hi += 0.5;
  if (!(y_hi > y_lo)) y_lo -= 0.5, y_hi += 0.5;

  auto px = [&](double x) { return kMargin + (x - x_lo) / (x_hi - x_lo) * (kWidth - 2 * kMargin); };
  auto py = [&](double y) {
    return kHeight - kMargin - (y - y_lo) / (y_hi - y_lo) * (kHeight - 2 * kMargin);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title
      << "</text>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
      << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\">" << table.columns.at(0) << "</text>\n";
  out << "<text x=\"5\" y=\"" << kHeight - kMargin << "\">" << format_number(y_lo) << "</text>\n";
  out << "<text x=\"5\" y=\"" << kMargin << "\">" << format_number(y_hi) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const double x = value(r, 0), y = value(r, series[s]);
      if (std::isfinite(x) && std::isfinite(y)) out << px(x) << ',' << py(y) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMargin - 150 << "\" y=\"" << kMargin + 15 * s
        << "\" fill=\"" << color << "\">" << table.columns[series[s]] << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace anc
