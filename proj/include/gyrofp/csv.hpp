#pragma once
// Diagnostics time series as CSV.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gyrofp/diagnostics.hpp"
#include "gyrofp/errors.hpp"

namespace gyrofp {

inline constexpr const char* kSeriesHeader =
    "t,mass,norm_2u,norm_2m,norm_l2m_l4,grad_norm_2m,rho_h_half,phi_h1,min_f,boundary_mass_fraction";

inline std::string format_record(const DiagnosticsRecord& r) {
  std::string line;
  char buf[32];
  for (double v : r.values()) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (!line.empty()) line += ',';
    line += buf;
  }
  return line;
}

inline void write_series(std::ostream& out, const std::vector<DiagnosticsRecord>& series) {
  out << kSeriesHeader << '\n';
  for (const auto& r : series) out << format_record(r) << '\n';
}

inline void write_series(const std::string& path, const std::vector<DiagnosticsRecord>& series) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("series: cannot open " + path + " for writing");
  write_series(out, series);
  if (!out) throw FormatError("series: write failed for " + path);
}

inline std::vector<DiagnosticsRecord> read_series(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("series: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSeriesHeader) throw FormatError("series: unexpected header '" + line + "'");
  std::vector<DiagnosticsRecord> series;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<double, DiagnosticsRecord::kFieldCount> v{};
    std::istringstream fields(line);
    std::string cell;
    std::size_t n = 0;
    while (std::getline(fields, cell, ',')) {
      if (n >= v.size()) throw FormatError("series: too many fields on row " + std::to_string(row));
      char* end = nullptr;
      v[n] = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw FormatError("series: bad number '" + cell + "' on row " + std::to_string(row));
      }
      ++n;
    }
    if (n != v.size()) throw FormatError("series: expected 10 fields on row " + std::to_string(row));
    series.push_back(DiagnosticsRecord::from_values(v));
    if (series.size() > 1 && !(series.back().t > series[series.size() - 2].t)) {
      throw FormatError("series: time not strictly increasing at row " + std::to_string(row));
    }
  }
  if (series.empty()) throw FormatError("series: no records");
  return series;
}

inline std::vector<DiagnosticsRecord> read_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("series: cannot open " + path);
  return read_series(in);
}

}  // namespace gyrofp
