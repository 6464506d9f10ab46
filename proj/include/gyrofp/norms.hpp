#pragma once
// Weighted norms of distributions and Sobolev norms of fields.
//
// x-integrals of a modal slice use Parseval: int |g|^2 dx = A sum_k |g(k)|^2.
// Sobolev norms of fields are coefficient sums without the area factor.

#include <cmath>
#include <span>
#include <vector>

#include "gyrofp/fft.hpp"
#include "gyrofp/spectral_field.hpp"
#include "gyrofp/velocity_grid.hpp"

namespace gyrofp {

/// (sum_j w_j(kind) ||f(., u_j)||^2_{L^2(x)})^{1/2}.
inline double weighted_l2_norm(const GyroDistribution& f, WeightKind kind = WeightKind::u_weight) {
  const auto w = f.grid().weights(kind);
  const std::size_t nu = f.nu();
  std::vector<double> energy(nu, 0.0);
  const auto data = f.data();
  for (std::size_t i = 0; i < f.lattice().count(); ++i) {
    for (std::size_t j = 0; j < nu; ++j) energy[j] += std::norm(data[i * nu + j]);
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < nu; ++j) sum += w[j] * energy[j];
  return std::sqrt(kTorusArea * sum);
}

/// (sum_j w_j(kind) ||grad_x f(., u_j)||^2_{L^2(x)})^{1/2}.
inline double gradient_norm(const GyroDistribution& f, WeightKind kind = WeightKind::m_weight) {
  const auto w = f.grid().weights(kind);
  const std::size_t nu = f.nu();
  const auto& lat = f.lattice();
  std::vector<double> energy(nu, 0.0);
  for (std::size_t i = 0; i < lat.count(); ++i) {
    const double k2 = lat.magnitude_squared(i);
    const auto m = f.mode(i);
    for (std::size_t j = 0; j < nu; ++j) energy[j] += k2 * std::norm(m[j]);
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < nu; ++j) sum += w[j] * energy[j];
  return std::sqrt(kTorusArea * sum);
}

/// (sum_j m_j ||f(., u_j)||^2_{L^4(x)})^{1/2}. The quartic integral is taken
/// on a grid of at least 4K+1 points per side, where it is exact.
inline double l2m_l4_norm(const GyroDistribution& f, TorusTransform& transform) {
  if (transform.lattice().truncation() != f.truncation() ||
      transform.grid_size() < 4 * f.truncation() + 1) {
    throw ShapeError("l2m_l4_norm: transform grid must hold 4K+1 points for K = " +
                     std::to_string(f.truncation()));
  }
  const auto w = f.grid().weights(WeightKind::m_weight);
  std::vector<double> values(transform.points());
  double sum = 0.0;
  for (std::size_t j = 0; j < f.nu(); ++j) {
    const SpectralField2D slice = f.slice(j);
    transform.to_physical(slice.coefficients(), values);
    double q = 0.0;
    for (double v : values) q += v * v * v * v;
    const double l4_squared = std::sqrt(kTorusArea * q / static_cast<double>(values.size()));
    sum += w[j] * l4_squared;
  }
  return std::sqrt(sum);
}

inline double l2m_l4_norm(const GyroDistribution& f) {
  TorusTransform transform(f.truncation(), dealiased_size(f.truncation(), 4));
  return l2m_l4_norm(f, transform);
}

/// (sum_k (1 + |k|^2)^s |c(k)|^2)^{1/2}; k = 0 is skipped for zero-mean fields.
inline double sobolev_norm(const SpectralField2D& field, double s) {
  const auto& lat = field.lattice();
  double sum = 0.0;
  for (std::size_t i = 0; i < lat.count(); ++i) {
    if (field.zero_mean() && i == lat.zero()) continue;
    const double c2 = std::norm(field[i]);
    if (c2 == 0.0) continue;
    sum += std::pow(1.0 + lat.magnitude_squared(i), s) * c2;
  }
  return std::sqrt(sum);
}

}  // namespace gyrofp
