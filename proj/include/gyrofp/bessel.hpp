#pragma once
// Zero-order Bessel function J0 and its derivative for nonnegative real
// arguments, plus the envelope bounds the gyro-average estimates rely on.
//
// Evaluation routes:
//   k <= 4       power series (terms alternate, no cancellation at this size)
//   4 < k <= 30  trapezoid rule on J0(k) = (1/pi) int_0^pi cos(k cos t) dt; the
//                integrand is periodic and entire, so 64 panels give machine
//                precision (aliasing error ~ J_128(k))
//   k > 30       Hankel asymptotic expansion, summed to its smallest term

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "gyrofp/errors.hpp"

namespace gyrofp::bessel {

namespace detail {

inline constexpr double kSeriesLimit = 4.0;
inline constexpr double kAsymptoticLimit = 30.0;
inline constexpr int kTrapezoidPanels = 64;

inline void require_argument(double k, const char* who) {
  if (!std::isfinite(k) || k < 0.0) {
    throw DomainError(std::string(who) + ": argument must be finite and nonnegative, got " +
                      std::to_string(k));
  }
}

inline const std::array<double, kTrapezoidPanels + 1>& cos_nodes() {
  static const auto nodes = [] {
    std::array<double, kTrapezoidPanels + 1> c{};
    for (int n = 0; n <= kTrapezoidPanels; ++n) {
      c[n] = std::cos(std::numbers::pi * n / kTrapezoidPanels);
    }
    return c;
  }();
  return nodes;
}

inline double series_j0(double k) {
  const double q = -0.25 * k * k;
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < 60; ++j) {
    term *= q / (static_cast<double>(j) * j);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// J0'(k) = -J1(k) = -(k/2) sum_m (-k^2/4)^m / (m! (m+1)!)
inline double series_j0_prime(double k) {
  const double q = -0.25 * k * k;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 60; ++m) {
    term *= q / (static_cast<double>(m) * (m + 1));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return -0.5 * k * sum;
}

inline double trapezoid_j0(double k) {
  const auto& c = cos_nodes();
  double sum = std::cos(k);  // both endpoints contribute cos(k) / 2
  for (int n = 1; n < kTrapezoidPanels; ++n) sum += std::cos(k * c[n]);
  return sum / kTrapezoidPanels;
}

inline double trapezoid_j0_prime(double k) {
  const auto& c = cos_nodes();
  double sum = std::sin(k);
  for (int n = 1; n < kTrapezoidPanels; ++n) sum += c[n] * std::sin(k * c[n]);
  return -sum / kTrapezoidPanels;
}

// Hankel expansion J_nu(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi).
inline double hankel(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double previous = 2.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (8.0 * k * x);
    const double magnitude = std::abs(term);
    if (magnitude > previous) break;  // asymptotic series started to diverge
    previous = magnitude;
    // a_k / x^k enters P for even k, Q for odd k, with alternating signs
    const int sign = ((k / 2) % 2 == 0) ? 1 : -1;
    if (k % 2 == 0) {
      p += sign * term;
    } else {
      q += sign * term;
    }
    if (magnitude < 1e-18) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace detail

/// J0(k) for k >= 0, absolute error below 1e-13.
inline double j0(double k) {
  detail::require_argument(k, "j0");
  if (k <= detail::kSeriesLimit) return detail::series_j0(k);
  if (k <= detail::kAsymptoticLimit) return detail::trapezoid_j0(k);
  return detail::hankel(0, k);
}

/// (J0)'(k) = -J1(k) for k >= 0.
inline double j0_prime(double k) {
  detail::require_argument(k, "j0_prime");
  if (k <= detail::kSeriesLimit) return detail::series_j0_prime(k);
  if (k <= detail::kAsymptoticLimit) return detail::trapezoid_j0_prime(k);
  return -detail::hankel(1, k);
}

/// J1(k), the first-order Bessel function; used for the l = 1 gyrophase harmonic.
inline double j1(double k) { return -j0_prime(k); }

struct BesselEval {
  double argument = 0.0;
  double value = 1.0;
  double derivative = 0.0;
};

inline BesselEval evaluate(double k) { return {k, j0(k), j0_prime(k)}; }

/// Envelope bounds on J0 and J0'. Each slack is (bound - |quantity|); all four
/// are nonnegative in exact arithmetic:
///   [0] |J0(k)|  <= min(1, 2^{-1/4} k^{-1/2})
///   [1] |J0(k)|  <= (1 + k^2)^{-1/4}
///   [2] |J0'(k)| <= min(1, sqrt(2 / (pi k)))
///   [3] |J0'(k)| <= (1 + k^2)^{-1/4}
inline std::array<double, 4> bound_slacks(const BesselEval& e) {
  const double k = e.argument;
  const double decay = std::pow(1.0 + k * k, -0.25);
  const double b0 = k > 0.0 ? std::min(1.0, std::pow(2.0, -0.25) / std::sqrt(k)) : 1.0;
  const double b2 = k > 0.0 ? std::min(1.0, std::sqrt(2.0 / (std::numbers::pi * k))) : 1.0;
  return {b0 - std::abs(e.value), decay - std::abs(e.value), b2 - std::abs(e.derivative),
          decay - std::abs(e.derivative)};
}

}  // namespace gyrofp::bessel
