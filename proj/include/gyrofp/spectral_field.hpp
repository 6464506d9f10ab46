#pragma once
// Truncated Fourier representations on the torus [0, 2 pi)^2.
//
// A real field is stored through all of its coefficients c(k), k in [-K, K]^2,
// f(x) = sum_k c(k) exp(i k.x). Coefficients are held for both k and -k so that
// operators are plain per-mode maps; Hermitian symmetry c(-k) = conj(c(k)) is an
// invariant the operators preserve rather than a storage trick.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "gyrofp/errors.hpp"
#include "gyrofp/velocity_grid.hpp"

namespace gyrofp {

using Complex = std::complex<double>;

/// Area of the periodic domain [0, 2 pi)^2.
inline constexpr double kTorusArea = 4.0 * std::numbers::pi * std::numbers::pi;

/// Index arithmetic for the square mode set [-K, K]^2, k1-major.
class ModeLattice {
 public:
  explicit ModeLattice(int truncation) : K_(truncation) {
    if (truncation < 0) throw ConfigError("ModeLattice: truncation must be >= 0");
  }
  int truncation() const { return K_; }
  std::size_t side() const { return static_cast<std::size_t>(2 * K_ + 1); }
  std::size_t count() const { return side() * side(); }
  std::size_t index(int k1, int k2) const {
    return static_cast<std::size_t>(k1 + K_) * side() + static_cast<std::size_t>(k2 + K_);
  }
  int k1(std::size_t index) const { return static_cast<int>(index / side()) - K_; }
  int k2(std::size_t index) const { return static_cast<int>(index % side()) - K_; }
  std::size_t mirror(std::size_t index) const { return count() - 1 - index; }
  std::size_t zero() const { return index(0, 0); }
  double magnitude_squared(std::size_t index) const {
    const double a = k1(index);
    const double b = k2(index);
    return a * a + b * b;
  }
  bool operator==(const ModeLattice&) const = default;

 private:
  int K_;
};

class SpectralField2D {
 public:
  explicit SpectralField2D(int truncation, bool zero_mean = false)
      : lattice_(truncation), zero_mean_(zero_mean), coeff_(lattice_.count()) {}

  const ModeLattice& lattice() const { return lattice_; }
  int truncation() const { return lattice_.truncation(); }
  bool zero_mean() const { return zero_mean_; }
  void set_zero_mean(bool flag) {
    zero_mean_ = flag;
    if (flag) coeff_[lattice_.zero()] = 0.0;
  }

  Complex& operator()(int k1, int k2) { return coeff_[lattice_.index(k1, k2)]; }
  const Complex& operator()(int k1, int k2) const { return coeff_[lattice_.index(k1, k2)]; }
  Complex& operator[](std::size_t i) { return coeff_[i]; }
  const Complex& operator[](std::size_t i) const { return coeff_[i]; }

  std::span<Complex> coefficients() { return coeff_; }
  std::span<const Complex> coefficients() const { return coeff_; }

  double mean() const { return coeff_[lattice_.zero()].real(); }

  /// Sets c(k) and c(-k) = conj(c(k)) together.
  void set_mode(int k1, int k2, Complex value) {
    (*this)(k1, k2) = value;
    (*this)(-k1, -k2) = std::conj(value);
  }

  /// Largest |c(-k) - conj(c(k))|.
  double hermitian_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < coeff_.size(); ++i) {
      worst = std::max(worst, std::abs(coeff_[lattice_.mirror(i)] - std::conj(coeff_[i])));
    }
    return worst;
  }

  /// Projects onto the real-field subspace.
  void enforce_hermitian() {
    for (std::size_t i = 0; i < coeff_.size() / 2; ++i) {
      const std::size_t m = lattice_.mirror(i);
      const Complex avg = 0.5 * (coeff_[i] + std::conj(coeff_[m]));
      coeff_[i] = avg;
      coeff_[m] = std::conj(avg);
    }
    coeff_[lattice_.zero()] = coeff_[lattice_.zero()].real();
    if (zero_mean_) coeff_[lattice_.zero()] = 0.0;
  }

  /// Value at a physical point, by direct summation.
  double evaluate(double x1, double x2) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < coeff_.size(); ++i) {
      const double phase = lattice_.k1(i) * x1 + lattice_.k2(i) * x2;
      sum += coeff_[i].real() * std::cos(phase) - coeff_[i].imag() * std::sin(phase);
    }
    return sum;
  }

  SpectralField2D& operator+=(const SpectralField2D& other) {
    check_same(other);
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += other.coeff_[i];
    return *this;
  }
  SpectralField2D& operator-=(const SpectralField2D& other) {
    check_same(other);
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= other.coeff_[i];
    return *this;
  }
  SpectralField2D& operator*=(double s) {
    for (auto& c : coeff_) c *= s;
    return *this;
  }

 private:
  void check_same(const SpectralField2D& other) const {
    if (!(lattice_ == other.lattice_)) throw ShapeError("SpectralField2D: truncation mismatch");
  }

  ModeLattice lattice_;
  bool zero_mean_;
  std::vector<Complex> coeff_;
};

/// f(t, x, u): modal in x (lattice [-K, K]^2), nodal in u (VelocityGrid),
/// stored row-major in (k1, k2, j).
class GyroDistribution {
 public:
  GyroDistribution(int truncation, std::shared_ptr<const VelocityGrid> grid)
      : lattice_(truncation), grid_(std::move(grid)) {
    if (!grid_) throw ConfigError("GyroDistribution: null velocity grid");
    data_.assign(lattice_.count() * grid_->size(), Complex{});
  }

  const ModeLattice& lattice() const { return lattice_; }
  int truncation() const { return lattice_.truncation(); }
  const VelocityGrid& grid() const { return *grid_; }
  const std::shared_ptr<const VelocityGrid>& grid_ptr() const { return grid_; }
  std::size_t nu() const { return grid_->size(); }

  Complex& operator()(int k1, int k2, std::size_t j) { return data_[lattice_.index(k1, k2) * nu() + j]; }
  const Complex& operator()(int k1, int k2, std::size_t j) const {
    return data_[lattice_.index(k1, k2) * nu() + j];
  }

  /// The N_u values of one x-mode.
  std::span<Complex> mode(std::size_t index) { return {data_.data() + index * nu(), nu()}; }
  std::span<const Complex> mode(std::size_t index) const { return {data_.data() + index * nu(), nu()}; }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  SpectralField2D slice(std::size_t j) const {
    SpectralField2D out(truncation());
    for (std::size_t i = 0; i < lattice_.count(); ++i) out[i] = data_[i * nu() + j];
    return out;
  }

  void set_slice(std::size_t j, const SpectralField2D& field) {
    if (!(field.lattice() == lattice_)) throw ShapeError("GyroDistribution::set_slice: truncation mismatch");
    for (std::size_t i = 0; i < lattice_.count(); ++i) data_[i * nu() + j] = field[i];
  }

  /// Total mass int f 2 pi u dx du.
  double mass() const {
    const auto w = grid_->weights(WeightKind::u_weight);
    const auto m0 = mode(lattice_.zero());
    double sum = 0.0;
    for (std::size_t j = 0; j < nu(); ++j) sum += w[j] * m0[j].real();
    return kTorusArea * sum;
  }

  double hermitian_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < lattice_.count(); ++i) {
      const auto a = mode(i);
      const auto b = mode(lattice_.mirror(i));
      for (std::size_t j = 0; j < nu(); ++j) worst = std::max(worst, std::abs(b[j] - std::conj(a[j])));
    }
    return worst;
  }

  void enforce_hermitian() {
    for (std::size_t i = 0; i < lattice_.count() / 2; ++i) {
      auto a = mode(i);
      auto b = mode(lattice_.mirror(i));
      for (std::size_t j = 0; j < nu(); ++j) {
        const Complex avg = 0.5 * (a[j] + std::conj(b[j]));
        a[j] = avg;
        b[j] = std::conj(avg);
      }
    }
    for (auto& c : mode(lattice_.zero())) c = c.real();
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
  }

  GyroDistribution& operator+=(const GyroDistribution& other) {
    check_same(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }
  GyroDistribution& operator-=(const GyroDistribution& other) {
    check_same(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
  }
  GyroDistribution& operator*=(double s) {
    for (auto& c : data_) c *= s;
    return *this;
  }

 private:
  void check_same(const GyroDistribution& other) const {
    if (!(lattice_ == other.lattice_) || !(*grid_ == *other.grid_)) {
      throw ShapeError("GyroDistribution: shape mismatch");
    }
  }

  ModeLattice lattice_;
  std::shared_ptr<const VelocityGrid> grid_;
  std::vector<Complex> data_;
};

}  // namespace gyrofp
