#pragma once
// Thin RAII layer over FFTW for the transform shapes the code needs:
//   TorusTransform  real N x N grid <-> truncated modes [-K, K]^2
//   ComplexFft2D    complex M x M grid, used by the 4D harness in velocity space
//   StridedFft      batched complex 1D transforms along either axis of an M x M block
// Plans use FFTW_ESTIMATE on buffers owned by the object, so the chosen
// algorithm, and therefore every bit of the output, is reproducible run to run.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <algorithm>
#include <span>
#include <string>

#include "gyrofp/errors.hpp"
#include "gyrofp/spectral_field.hpp"

namespace gyrofp {

namespace detail {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
struct PlanDestroy {
  void operator()(fftw_plan p) const { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDestroy>;

template <class T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw NumericalError("fftw_malloc failed");
  return std::unique_ptr<T[], FftwFree>(p);
}

}  // namespace detail

/// Smallest even grid size >= factor * K + 1: with factor 3 the pointwise
/// product of two K-band fields is alias-free after truncation back to K
/// (the 2/3 rule); factor 4 makes quartic integrals exact.
inline int dealiased_size(int truncation, int factor = 3) {
  int n = factor * truncation + 1;
  if (n % 2 != 0) ++n;
  return std::max(n, 4);
}

class TorusTransform {
 public:
  TorusTransform(int truncation, int grid_size) : lattice_(truncation), n_(grid_size) {
    if (grid_size < 2 * truncation + 1) {
      throw ConfigError("TorusTransform: grid " + std::to_string(grid_size) +
                        " cannot hold modes up to " + std::to_string(truncation));
    }
    const std::size_t nn = static_cast<std::size_t>(n_) * n_;
    half_ = static_cast<std::size_t>(n_ / 2 + 1);
    real_ = detail::fftw_buffer<double>(nn);
    spec_ = detail::fftw_buffer<fftw_complex>(static_cast<std::size_t>(n_) * half_);
    forward_.reset(fftw_plan_dft_r2c_2d(n_, n_, real_.get(), spec_.get(), FFTW_ESTIMATE));
    backward_.reset(fftw_plan_dft_c2r_2d(n_, n_, spec_.get(), real_.get(), FFTW_ESTIMATE));
    if (!forward_ || !backward_) throw NumericalError("TorusTransform: FFTW planning failed");
  }

  explicit TorusTransform(int truncation) : TorusTransform(truncation, dealiased_size(truncation)) {}

  int grid_size() const { return n_; }
  std::size_t points() const { return static_cast<std::size_t>(n_) * n_; }
  const ModeLattice& lattice() const { return lattice_; }
  double spacing() const { return 2.0 * std::numbers::pi / n_; }

  /// Physical values f(x_a, x_b), x = 2 pi (a, b) / N, row-major in (a, b).
  /// Coefficients must be Hermitian; only the k2 >= 0 half is read.
  void to_physical(std::span<const Complex> modes, std::span<double> out) {
    check(modes.size(), out.size());
    const int K = lattice_.truncation();
    std::fill_n(reinterpret_cast<double*>(spec_.get()), 2 * static_cast<std::size_t>(n_) * half_, 0.0);
    for (int k1 = -K; k1 <= K; ++k1) {
      const std::size_t row = static_cast<std::size_t>((k1 + n_) % n_);
      for (int k2 = 0; k2 <= K; ++k2) {
        const Complex c = modes[lattice_.index(k1, k2)];
        spec_[row * half_ + k2][0] = c.real();
        spec_[row * half_ + k2][1] = c.imag();
      }
    }
    fftw_execute(backward_.get());
    std::copy_n(real_.get(), points(), out.data());
  }

  /// Truncated Fourier coefficients of a real grid function (normalized by N^2).
  void to_modal(std::span<const double> values, std::span<Complex> modes) {
    check(modes.size(), values.size());
    std::copy_n(values.data(), points(), real_.get());
    fftw_execute(forward_.get());
    const int K = lattice_.truncation();
    const double scale = 1.0 / static_cast<double>(points());
    for (int k1 = -K; k1 <= K; ++k1) {
      const std::size_t row = static_cast<std::size_t>((k1 + n_) % n_);
      for (int k2 = 0; k2 <= K; ++k2) {
        const Complex c{spec_[row * half_ + k2][0] * scale, spec_[row * half_ + k2][1] * scale};
        modes[lattice_.index(k1, k2)] = c;
        modes[lattice_.index(-k1, -k2)] = std::conj(c);
      }
    }
  }

 private:
  void check(std::size_t modes, std::size_t values) const {
    if (modes != lattice_.count() || values != points()) {
      throw ShapeError("TorusTransform: expected " + std::to_string(lattice_.count()) + " modes and " +
                       std::to_string(points()) + " grid values");
    }
  }

  ModeLattice lattice_;
  int n_;
  std::size_t half_ = 0;
  std::unique_ptr<double[], detail::FftwFree> real_;
  std::unique_ptr<fftw_complex[], detail::FftwFree> spec_;
  detail::PlanHandle forward_;
  detail::PlanHandle backward_;
};

/// In-place complex M x M transforms. forward() is unnormalized exp(-i), backward() exp(+i).
class ComplexFft2D {
 public:
  explicit ComplexFft2D(int m) : m_(m) {
    buf_ = detail::fftw_buffer<fftw_complex>(static_cast<std::size_t>(m) * m);
    forward_.reset(fftw_plan_dft_2d(m, m, buf_.get(), buf_.get(), FFTW_FORWARD, FFTW_ESTIMATE));
    backward_.reset(fftw_plan_dft_2d(m, m, buf_.get(), buf_.get(), FFTW_BACKWARD, FFTW_ESTIMATE));
    if (!forward_ || !backward_) throw NumericalError("ComplexFft2D: FFTW planning failed");
  }
  int size() const { return m_; }
  std::span<Complex> buffer() {
    return {reinterpret_cast<Complex*>(buf_.get()), static_cast<std::size_t>(m_) * m_};
  }
  void forward() { fftw_execute(forward_.get()); }
  void backward() { fftw_execute(backward_.get()); }

 private:
  int m_;
  std::unique_ptr<fftw_complex[], detail::FftwFree> buf_;
  detail::PlanHandle forward_;
  detail::PlanHandle backward_;
};

/// Batched in-place complex 1D transforms of length m over an M x M block:
/// `howmany` lines, element stride `stride`, line distance `dist`.
class StridedFft {
 public:
  StridedFft(int m, int howmany, int stride, int dist) : size_(static_cast<std::size_t>(m) * howmany) {
    buf_ = detail::fftw_buffer<fftw_complex>(size_);
    int n[] = {m};
    forward_.reset(fftw_plan_many_dft(1, n, howmany, buf_.get(), nullptr, stride, dist, buf_.get(), nullptr, stride,
                                      dist, FFTW_FORWARD, FFTW_ESTIMATE));
    backward_.reset(fftw_plan_many_dft(1, n, howmany, buf_.get(), nullptr, stride, dist, buf_.get(), nullptr,
                                       stride, dist, FFTW_BACKWARD, FFTW_ESTIMATE));
    if (!forward_ || !backward_) throw NumericalError("StridedFft: FFTW planning failed");
  }
  std::span<Complex> buffer() { return {reinterpret_cast<Complex*>(buf_.get()), size_}; }
  void forward() { fftw_execute(forward_.get()); }
  void backward() { fftw_execute(backward_.get()); }

 private:
  std::size_t size_;
  std::unique_ptr<fftw_complex[], detail::FftwFree> buf_;
  detail::PlanHandle forward_;
  detail::PlanHandle backward_;
};

}  // namespace gyrofp
