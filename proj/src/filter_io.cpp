#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "anc/errors.hpp"
#include "anc/fxlms.hpp"

namespace anc {

namespace {

std::string exact_decimal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError(std::string("filter file: cannot parse ") + what + " '" + text + "'");
  }
  if (used != text.size()) {
    throw DomainError(std::string("filter file: trailing characters in ") + what);
  }
  return v;
}

}  // namespace

void write_filter(std::ostream& out, const FixedFilter& filter, double sample_rate) {
  out << "n_taps=" << filter.size() << " fs=" << exact_decimal(sample_rate) << '\n';
  for (double w : filter.coefficients()) out << exact_decimal(w) << '\n';
}

LoadedFilter read_filter(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw DomainError("filter file: missing header");

  std::istringstream fields(header);
  std::string taps_field, rate_field, extra;
  fields >> taps_field >> rate_field;
  if (taps_field.rfind("n_taps=", 0) != 0 || rate_field.rfind("fs=", 0) != 0 ||
      (fields >> extra)) {
    throw DomainError("filter file: header must read 'n_taps=<N> fs=<Hz>'");
  }
  const double taps_value = parse_double(taps_field.substr(7), "n_taps");
  const double rate = parse_double(rate_field.substr(3), "fs");
  if (!(taps_value >= 1.0) || taps_value != static_cast<double>(static_cast<long>(taps_value))) {
    throw DomainError("filter file: n_taps must be a positive integer");
  }
  if (!(rate > 0.0)) throw DomainError("filter file: fs must be positive");

  const auto n = static_cast<std::size_t>(taps_value);
  std::vector<double> coefficients;
  coefficients.reserve(n);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    coefficients.push_back(parse_double(line, "coefficient"));
  }
  if (coefficients.size() != n) {
    throw DomainError("filter file: expected " + std::to_string(n) + " coefficients, found " +
                      std::to_string(coefficients.size()));
  }
  return LoadedFilter{FixedFilter(std::move(coefficients)), rate};
}

}  // namespace anc
