#pragma once
// Initial distributions.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "gyrofp/errors.hpp"
#include "gyrofp/fft.hpp"
#include "gyrofp/spectral_field.hpp"

namespace gyrofp {

struct ModePerturbation {
  int k1 = 1;
  int k2 = 0;
  double amplitude = 0.0;
  double phase = 0.0;
};

/// e^{-u^2/T0} (1 + sum_m a_m cos(k_m . x + phase_m)), unnormalized.
inline void fill_perturbed_maxwellian(GyroDistribution& f, double T0, const std::vector<ModePerturbation>& modes) {
  if (!std::isfinite(T0) || T0 <= 0.0) throw ConfigError("maxwellian temperature must be positive");
  const int K = f.truncation();
  for (auto& c : f.data()) c = 0.0;
  std::vector<double> profile(f.nu());
  for (std::size_t j = 0; j < f.nu(); ++j) profile[j] = std::exp(-f.grid().node(j) * f.grid().node(j) / T0);
  for (std::size_t j = 0; j < f.nu(); ++j) f(0, 0, j) = profile[j];
  for (const auto& m : modes) {
    if (std::abs(m.k1) > K || std::abs(m.k2) > K || (m.k1 == 0 && m.k2 == 0)) {
      throw ConfigError("perturbation mode (" + std::to_string(m.k1) + "," + std::to_string(m.k2) +
                        ") outside 0 < |k| <= K");
    }
    const Complex c = 0.5 * m.amplitude * std::polar(1.0, m.phase);
    for (std::size_t j = 0; j < f.nu(); ++j) {
      f(m.k1, m.k2, j) += c * profile[j];
      f(-m.k1, -m.k2, j) += std::conj(c) * profile[j];
    }
  }
}

/// Scales f so that int f 2 pi u dx du = 1; returns the factor applied.
inline double normalize_mass(GyroDistribution& f) {
  const double m = f.mass();
  if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("initial data has nonpositive mass");
  const double factor = 1.0 / m;
  f *= factor;
  return factor;
}

/// Smallest value of f on the dealiased physical grid.
inline double grid_minimum(const GyroDistribution& f) {
  TorusTransform transform(f.truncation());
  std::vector<double> values(transform.points());
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < f.nu(); ++j) {
    const SpectralField2D s = f.slice(j);
    transform.to_physical(s.coefficients(), values);
    for (double v : values) lo = std::min(lo, v);
  }
  return lo;
}

/// Zero-x-mean perturbation direction: random low modes (|k_i| <= 3) times the
/// Maxwellian profile, seeded for reproducibility.
inline GyroDistribution random_perturbation(const GyroDistribution& like, double T0, unsigned long long seed) {
  GyroDistribution p(like.truncation(), like.grid_ptr());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int band = std::min(3, like.truncation());
  for (int k1 = 0; k1 <= band; ++k1) {
    for (int k2 = -band; k2 <= band; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const Complex c{normal(rng), normal(rng)};
      for (std::size_t j = 0; j < like.nu(); ++j) {
        const double u = like.grid().node(j);
        const double profile = std::exp(-u * u / T0) * (1.0 + 0.25 * u * u);
        p(k1, k2, j) = c * profile;
        p(-k1, -k2, j) = std::conj(c) * profile;
      }
    }
  }
  return p;
}

}  // namespace gyrofp
