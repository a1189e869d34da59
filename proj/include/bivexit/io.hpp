#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bivexit/univariate.hpp"

namespace bivexit {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AngleDataset {
  std::vector<std::pair<double, double>> rows;  // radians in [0, 2pi)
  std::string source;
  bool degrees_input = false;

  std::size_t size() const { return rows.size(); }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline double parse_field(const std::string& field, const std::string& path,
                          std::size_t line_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument("trailing");
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
    return v;
  } catch (const std::exception&) {
    throw DataError(path + ":" + std::to_string(line_no) +
                    ": malformed value '" + field + "'");
  }
}

}  // namespace detail

// angle-pair CSV: header `theta_u,theta_v`, radians by default.
// Values are wrapped into [0, 2pi); non-finite rows are rejected.
inline AngleDataset ingest_csv(const std::string& path, bool degrees = false) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  AngleDataset ds;
  ds.source = path;
  ds.degrees_input = degrees;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line))
    throw DataError(path + ": empty file (expected header theta_u,theta_v)");
  ++line_no;
  if (detail::trim(line) != "theta_u,theta_v")
    throw DataError(path + ":1: expected header 'theta_u,theta_v'");
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    std::size_t comma = line.find(',');
    if (comma == std::string::npos ||
        line.find(',', comma + 1) != std::string::npos)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected exactly two comma-separated values");
    double a = detail::parse_field(detail::trim(line.substr(0, comma)), path, line_no);
    double b = detail::parse_field(detail::trim(line.substr(comma + 1)), path, line_no);
    if (degrees) {
      a *= kPi / 180.0;
      b *= kPi / 180.0;
    }
    ds.rows.emplace_back(wrap_angle(a), wrap_angle(b));
  }
  return ds;
}

// 17 significant digits: round-trips an IEEE double exactly
inline std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_csv(const std::string& path,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open file for writing");
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::logic_error("write_csv: row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_value(row[i]);
    out << "\n";
  }
  if (!out) throw DataError(path + ": write failed");
}

}  // namespace bivexit
