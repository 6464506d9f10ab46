#pragma once
// Independent reference values for the test suites. Nothing here calls the
// library's own Bessel or quadrature code.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

namespace oracle {

using Complex = std::complex<double>;

/// Composite 61-point Gauss-Kronrod on n equal panels of [a, b].
template <class F>
double panels(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a + i * h, a + (i + 1) * h, 0);
  }
  return sum;
}

/// (1/pi) int_0^pi cos(k cos t) dt.
inline double j0_quadrature(double k) {
  auto f = [k](double t) { return std::cos(k * std::cos(t)); };
  return panels(f, 0.0, std::numbers::pi, 8 + static_cast<int>(std::ceil(k))) / std::numbers::pi;
}

/// -(1/pi) int_0^pi cos t sin(k cos t) dt.
inline double j0_prime_quadrature(double k) {
  auto f = [k](double t) { return std::cos(t) * std::sin(k * std::cos(t)); };
  return -panels(f, 0.0, std::numbers::pi, 8 + static_cast<int>(std::ceil(k))) / std::numbers::pi;
}

inline double j0_special(double k) { return boost::math::cyl_bessel_j(0, k); }
inline double j0_prime_special(double k) { return -boost::math::cyl_bessel_j(1, k); }

/// Truncated power series sum_{j < terms} (-1)^j (k/2)^{2j} / (j!)^2, and the first omitted term.
inline double j0_series(double k, int terms, double* next_term = nullptr) {
  double term = 1.0;
  double sum = 0.0;
  for (int j = 0; j < terms; ++j) {
    sum += term;
    term *= -(k * k / 4.0) / ((j + 1.0) * (j + 1.0));
  }
  if (next_term) *next_term = std::abs(term);
  return sum;
}

/// e^{-x} I0(x), with the large-x asymptotic series where I0 overflows.
inline double scaled_i0(double x) {
  if (x < 500.0) return std::exp(-x) * boost::math::cyl_bessel_i(0, x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 12; ++k) {
    term *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    sum += term;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

/// H_T(k) = (2/T) int_0^inf J0(ku)^2 e^{-u^2/T} u du = e^{-lambda} I0(lambda), lambda = k^2 T / 2.
inline double ht_closed_form(double k, double T) { return scaled_i0(0.5 * k * k * T); }

/// Same integral by panel quadrature of boost's J0, for moderate k.
inline double ht_quadrature(double k, double T) {
  auto f = [k, T](double u) {
    const double j = boost::math::cyl_bessel_j(0, k * u);
    return j * j * std::exp(-u * u / T) * u;
  };
  const double top = 8.0 * std::sqrt(T);
  return 2.0 / T * panels(f, 0.0, top, 8 + static_cast<int>(std::ceil(k * top)));
}

/// Uniformly random Hermitian coefficients on [-K, K]^2 (k1-major, mirror = count - 1 - i).
inline std::vector<Complex> random_hermitian(int K, std::mt19937_64& rng, bool zero_mean, double decay = 0.0) {
  const std::size_t side = 2 * K + 1;
  const std::size_t count = side * side;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> c(count);
  for (std::size_t i = 0; i < count / 2; ++i) {
    const int k1 = static_cast<int>(i / side) - K;
    const int k2 = static_cast<int>(i % side) - K;
    const double scale = std::pow(1.0 + k1 * k1 + k2 * k2, -decay);
    c[i] = scale * Complex{normal(rng), normal(rng)};
    c[count - 1 - i] = std::conj(c[i]);
  }
  c[count / 2] = zero_mean ? 0.0 : normal(rng);
  return c;
}

/// Direct evaluation of a real trigonometric polynomial at (x1, x2).
inline double evaluate(const std::vector<Complex>& c, int K, double x1, double x2) {
  const std::size_t side = 2 * K + 1;
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int k1 = static_cast<int>(i / side) - K;
    const int k2 = static_cast<int>(i % side) - K;
    sum += (c[i] * std::polar(1.0, k1 * x1 + k2 * x2)).real();
  }
  return sum;
}

}  // namespace oracle
