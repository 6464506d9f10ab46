#pragma once
// Fourier-multiplier operators of the model: gyro-average, the electroneutrality
// multiplier H_T, density, potential and E x B drift.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gyrofp/bessel.hpp"
#include "gyrofp/errors.hpp"
#include "gyrofp/spectral_field.hpp"
#include "gyrofp/velocity_grid.hpp"

namespace gyrofp {

inline void require_temperature(double T, const char* who) {
  if (!std::isfinite(T) || T <= 0.0) {
    throw DomainError(std::string(who) + ": temperature must be positive and finite, got " + std::to_string(T));
  }
}

/// Multiplies mode k by J0(|k| u).
inline SpectralField2D gyroaverage(const SpectralField2D& field, double u) {
  if (!std::isfinite(u) || u < 0.0) {
    throw DomainError("gyroaverage: radius must be finite and nonnegative, got " + std::to_string(u));
  }
  SpectralField2D out = field;
  const auto& lat = field.lattice();
  for (std::size_t i = 0; i < lat.count(); ++i) {
    if (i == lat.zero()) continue;
    out[i] *= bessel::j0(std::sqrt(lat.magnitude_squared(i)) * u);
  }
  return out;
}

/// H_T(k) = (2/T) int J0(k u)^2 exp(-u^2/T) u du by the grid's quadrature.
inline double ht_hat(double k_mag, double T, const VelocityGrid& grid) {
  require_temperature(T, "ht_hat");
  if (!std::isfinite(k_mag) || k_mag < 0.0) throw DomainError("ht_hat: |k| must be finite and nonnegative");
  const auto u = grid.nodes();
  const auto w = grid.base_weights();
  double sum = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double b = bessel::j0(k_mag * u[j]);
    sum += w[j] * b * b * std::exp(-u[j] * u[j] / T) * u[j];
  }
  return 2.0 * sum / T;
}

/// Quadrature grid on [0, 6 sqrt(T)] fine enough to resolve J0(k u)^2 to ~1e-12.
inline VelocityGrid ht_grid(double k_mag, double T) {
  require_temperature(T, "ht_grid");
  const double u_max = 6.0 * std::sqrt(T);
  const auto n = static_cast<std::size_t>(std::max(1024.0, std::ceil(24.0 * k_mag * u_max)));
  return VelocityGrid(n, u_max);
}

inline double ht_hat(double k_mag, double T) { return ht_hat(k_mag, T, ht_grid(k_mag, T)); }

/// Constant c_T = 4 / (1 - exp(-1/T)) bounding T / (1 - H_T(k)).
inline double inversion_bound(double T) { return 4.0 / (1.0 - std::exp(-1.0 / T)); }

/// Lower bound (|k|^2 T / 4)(1 - exp(-1/(|k|^2 T))) on 1 - H_T(k).
inline double multiplier_gap_bound(double k_mag, double T) {
  const double a = k_mag * k_mag * T;
  return 0.25 * a * (-std::expm1(-1.0 / a));
}

/// Per-magnitude multipliers for one (K, T, velocity grid), deduplicated by |k|^2.
class MultiplierTable {
 public:
  MultiplierTable(int truncation, double T, std::shared_ptr<const VelocityGrid> grid)
      : lattice_(truncation), T_(T), grid_(std::move(grid)) {
    require_temperature(T, "MultiplierTable");
    if (!grid_) throw ConfigError("MultiplierTable: null velocity grid");
    std::map<int, std::size_t> slot_of;
    slot_.resize(lattice_.count());
    for (std::size_t i = 0; i < lattice_.count(); ++i) {
      const int m2 = lattice_.k1(i) * lattice_.k1(i) + lattice_.k2(i) * lattice_.k2(i);
      auto [it, fresh] = slot_of.emplace(m2, magnitude_.size());
      if (fresh) magnitude_.push_back(std::sqrt(static_cast<double>(m2)));
      slot_[i] = it->second;
    }
    const std::size_t nu = grid_->size();
    j0_.resize(magnitude_.size() * nu);
    ht_.resize(magnitude_.size());
    lt_inv_.resize(magnitude_.size());
    for (std::size_t s = 0; s < magnitude_.size(); ++s) {
      const double k = magnitude_[s];
      for (std::size_t j = 0; j < nu; ++j) j0_[s * nu + j] = bessel::j0(k * grid_->node(j));
      ht_[s] = k == 0.0 ? 1.0 : ht_hat(k, T);
      if (k == 0.0) {
        lt_inv_[s] = 0.0;
        continue;
      }
      const double gap = 1.0 - ht_[s];
      if (!(gap >= 1e-14)) {
        throw NumericalError("MultiplierTable: singular multiplier 1 - H_T = " + std::to_string(gap) +
                             " at |k| = " + std::to_string(k));
      }
      lt_inv_[s] = T / gap;
    }
  }

  int truncation() const { return lattice_.truncation(); }
  const ModeLattice& lattice() const { return lattice_; }
  double temperature() const { return T_; }
  const VelocityGrid& grid() const { return *grid_; }

  std::size_t magnitude_count() const { return magnitude_.size(); }
  double magnitude(std::size_t slot) const { return magnitude_[slot]; }
  std::size_t slot(std::size_t mode) const { return slot_[mode]; }

  /// J0(|k| u_j) for mode index i.
  double j0(std::size_t mode, std::size_t j) const { return j0_[slot_[mode] * grid_->size() + j]; }
  double ht(std::size_t mode) const { return ht_[slot_[mode]]; }
  /// T / (1 - H_T(k)); zero at k = 0 (zero-mean gauge).
  double lt_inv(std::size_t mode) const { return lt_inv_[slot_[mode]]; }

 private:
  ModeLattice lattice_;
  double T_;
  std::shared_ptr<const VelocityGrid> grid_;
  std::vector<std::size_t> slot_;
  std::vector<double> magnitude_;
  std::vector<double> j0_;
  std::vector<double> ht_;
  std::vector<double> lt_inv_;
};

/// rho(k) = sum_j w_j J0(|k| u_j) f(k, u_j).
inline SpectralField2D compute_density(const GyroDistribution& f, const MultiplierTable& table) {
  if (!(f.lattice() == table.lattice()) || !(f.grid() == table.grid())) {
    throw ShapeError("compute_density: distribution and table disagree on K or grid");
  }
  const auto w = f.grid().weights(WeightKind::u_weight);
  SpectralField2D rho(f.truncation());
  for (std::size_t i = 0; i < f.lattice().count(); ++i) {
    const auto m = f.mode(i);
    Complex sum{};
    for (std::size_t j = 0; j < f.nu(); ++j) sum += (w[j] * table.j0(i, j)) * m[j];
    rho[i] = sum;
  }
  rho[f.lattice().zero()] = rho[f.lattice().zero()].real();
  return rho;
}

/// Table-free density, evaluating J0 directly.
inline SpectralField2D compute_density(const GyroDistribution& f) {
  const auto w = f.grid().weights(WeightKind::u_weight);
  const auto& lat = f.lattice();
  SpectralField2D rho(f.truncation());
  for (std::size_t i = 0; i < lat.count(); ++i) {
    const double k = std::sqrt(lat.magnitude_squared(i));
    const auto m = f.mode(i);
    Complex sum{};
    for (std::size_t j = 0; j < f.nu(); ++j) sum += (w[j] * bessel::j0(k * f.grid().node(j))) * m[j];
    rho[i] = sum;
  }
  return rho;
}

/// Phi(k) = T rho(k) / (1 - H_T(k)) for k != 0, Phi(0) = 0.
inline SpectralField2D solve_potential(const SpectralField2D& rho, const MultiplierTable& table) {
  if (!(rho.lattice() == table.lattice())) throw ShapeError("solve_potential: truncation mismatch");
  SpectralField2D phi(rho.truncation(), true);
  for (std::size_t i = 0; i < rho.lattice().count(); ++i) phi[i] = table.lt_inv(i) * rho[i];
  phi[rho.lattice().zero()] = 0.0;
  return phi;
}

/// Components of (J0_u grad Phi)^perp: v1 = -d2 (J0_u Phi), v2 = d1 (J0_u Phi).
inline std::pair<SpectralField2D, SpectralField2D> drift_velocity(const SpectralField2D& phi, double u) {
  const SpectralField2D g = gyroaverage(phi, u);
  SpectralField2D v1(phi.truncation(), true);
  SpectralField2D v2(phi.truncation(), true);
  const auto& lat = phi.lattice();
  const Complex I{0.0, 1.0};
  for (std::size_t i = 0; i < lat.count(); ++i) {
    v1[i] = -I * static_cast<double>(lat.k2(i)) * g[i];
    v2[i] = I * static_cast<double>(lat.k1(i)) * g[i];
  }
  return {std::move(v1), std::move(v2)};
}

}  // namespace gyrofp
