#pragma once
// Per-record diagnostics and the a-priori inequality monitors.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "gyrofp/fft.hpp"
#include "gyrofp/norms.hpp"
#include "gyrofp/spectral_ops.hpp"

namespace gyrofp {

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double norm_2u = 0.0;
  double norm_2m = 0.0;
  double norm_l2m_l4 = 0.0;
  double grad_norm_2m = 0.0;
  double rho_h_half = 0.0;
  double phi_h1 = 0.0;
  double min_f = 0.0;
  double boundary_mass_fraction = 0.0;

  static constexpr std::size_t kFieldCount = 10;
  std::array<double, kFieldCount> values() const {
    return {t, mass, norm_2u, norm_2m, norm_l2m_l4, grad_norm_2m, rho_h_half, phi_h1, min_f,
            boundary_mass_fraction};
  }
  static DiagnosticsRecord from_values(const std::array<double, kFieldCount>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]};
  }
  bool all_finite() const {
    const auto v = values();
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  }
  bool operator==(const DiagnosticsRecord&) const = default;
};

/// Evaluates every monitored quantity. `quartic` must be a 4K+1 grid transform.
inline DiagnosticsRecord compute_record(double t, const GyroDistribution& f, const SpectralField2D& rho,
                                        const SpectralField2D& phi, TorusTransform& quartic) {
  DiagnosticsRecord r;
  r.t = t;
  r.mass = f.mass();
  r.norm_2u = weighted_l2_norm(f, WeightKind::u_weight);
  r.norm_2m = weighted_l2_norm(f, WeightKind::m_weight);
  r.grad_norm_2m = gradient_norm(f, WeightKind::m_weight);

  if (quartic.lattice().truncation() != f.truncation() || quartic.grid_size() < 4 * f.truncation() + 1) {
    throw ShapeError("compute_record: quartic transform must hold 4K+1 points per side");
  }
  const auto wm = f.grid().weights(WeightKind::m_weight);
  std::vector<double> values(quartic.points());
  double l4 = 0.0;
  double min_f = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < f.nu(); ++j) {
    const SpectralField2D slice = f.slice(j);
    quartic.to_physical(slice.coefficients(), values);
    double q = 0.0;
    for (double v : values) {
      q += v * v * v * v;
      min_f = std::min(min_f, v);
    }
    l4 += wm[j] * std::sqrt(kTorusArea * q / static_cast<double>(values.size()));
  }
  r.norm_l2m_l4 = std::sqrt(l4);
  r.min_f = min_f;

  SpectralField2D fluctuation = rho;
  fluctuation.set_zero_mean(true);
  r.rho_h_half = sobolev_norm(fluctuation, 0.5);
  r.phi_h1 = sobolev_norm(phi, 1.0);

  const auto wu = f.grid().weights(WeightKind::u_weight);
  const std::size_t top = f.nu() - 1;
  const double top_mass = kTorusArea * wu[top] * std::abs(f.mode(f.lattice().zero())[top].real());
  r.boundary_mass_fraction = r.mass != 0.0 ? top_mass / std::abs(r.mass) : 0.0;
  return r;
}

enum class Inequality { u_norm, m_norm, l2m_l4, rho_regularity };
inline constexpr std::array<Inequality, 4> kInequalities{Inequality::u_norm, Inequality::m_norm,
                                                         Inequality::l2m_l4, Inequality::rho_regularity};

inline const char* to_string(Inequality which) {
  switch (which) {
    case Inequality::u_norm: return "u_norm";
    case Inequality::m_norm: return "m_norm";
    case Inequality::l2m_l4: return "l2m_l4";
    case Inequality::rho_regularity: return "rho_regularity";
  }
  return "?";
}

struct MonitorResult {
  std::size_t record = 0;
  Inequality which = Inequality::u_norm;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // 1 - lhs / rhs
  bool pass = true;
};

struct MonitorReport {
  std::vector<MonitorResult> results;
  std::array<double, 4> worst_margin{1.0, 1.0, 1.0, 1.0};
  bool pass = true;

  double worst(Inequality which) const { return worst_margin[static_cast<std::size_t>(which)]; }
  bool operator==(const MonitorReport& other) const {
    if (pass != other.pass || worst_margin != other.worst_margin || results.size() != other.results.size()) {
      return false;
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& a = results[i];
      const auto& b = other.results[i];
      if (a.record != b.record || a.which != b.which || a.pass != b.pass || a.margin != b.margin) return false;
    }
    return true;
  }
};

/// (e^{2 beta t} - 1) / beta, with the limit 2t at beta = 0.
inline double growth_integral(double beta, double t) {
  if (beta == 0.0) return 2.0 * t;
  return std::expm1(2.0 * beta * t) / beta;
}

/// The four inequality bounds at time t for initial record r0.
inline std::array<double, 4> apriori_bounds(const DiagnosticsRecord& r0, double t, double nu, double beta) {
  const double m2 = r0.norm_2m * r0.norm_2m + (2.0 * nu + beta) * growth_integral(beta, t) * r0.norm_2u * r0.norm_2u;
  return {std::exp(beta * t) * r0.norm_2u, std::sqrt(m2), std::exp((beta + 2.0 * nu) * t) * r0.norm_l2m_l4, 0.0};
}

/// Density regularity constant: ||rho - mean||_{H^{1/2}} <= 2^{1/4} pi ||f||_{2,m} / sqrt(A).
inline double rho_regularity_bound(double norm_2m) {
  return std::pow(2.0, 0.25) * std::numbers::pi * norm_2m / std::sqrt(kTorusArea);
}

inline MonitorReport check_apriori(const std::vector<DiagnosticsRecord>& series, double nu, double beta,
                                   double slack = 1e-6) {
  MonitorReport report;
  if (series.empty()) return report;
  const DiagnosticsRecord& r0 = series.front();
  for (std::size_t n = 0; n < series.size(); ++n) {
    const DiagnosticsRecord& r = series[n];
    const double dt = r.t - r0.t;
    auto bounds = apriori_bounds(r0, dt, nu, beta);
    bounds[3] = rho_regularity_bound(r.norm_2m);
    const std::array<double, 4> lhs{r.norm_2u, r.norm_2m, r.norm_l2m_l4, r.rho_h_half};
    for (std::size_t q = 0; q < 4; ++q) {
      MonitorResult m;
      m.record = n;
      m.which = kInequalities[q];
      m.lhs = lhs[q];
      m.rhs = bounds[q];
      if (!std::isfinite(m.lhs) || !std::isfinite(m.rhs)) {
        m.margin = -std::numeric_limits<double>::infinity();
      } else if (m.rhs > 0.0) {
        m.margin = 1.0 - m.lhs / m.rhs;
      } else {
        m.margin = m.lhs <= 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
      }
      m.pass = m.margin >= -slack;
      report.worst_margin[q] = std::min(report.worst_margin[q], m.margin);
      report.pass = report.pass && m.pass;
      report.results.push_back(m);
    }
  }
  return report;
}

}  // namespace gyrofp
