#pragma once
// Conservative discretization of
//   D f = beta (u f' + 2 f) + nu (1/u)(u f')'
// on the cell-centered velocity grid.
//
// The operator is written as D = W^{-1} S with W = diag(w_j), the weights of
// int . 2 pi u du, and S a sum of interface fluxes:
//   diffusion  nu kappa_{j+1/2} (f_{j+1} - f_j) / du,  kappa = 2 C_j / u_{j+1/2}
//   drift      beta g_{j+1/2} (f_j + f_{j+1}) / 2,      g = 2 C_j
// where C_j = w_0 + ... + w_j is the discrete volume of the disc of radius
// u_{j+1/2}. With exact cell volumes these reduce to 2 pi u and 2 pi u^2. Both
// fluxes vanish at u = 0 and at u_max. Consequences that hold exactly:
//   sum_j w_j (D f)_j = 0                      (mass)
//   S_nu symmetric, negative semidefinite       (self-adjoint in the w product)
//   <f, S_beta f> <= beta <f, W f>              (u-norm grows at most like e^{beta t})
//   D 1 = 2 beta and D_nu u^2 = 4 nu            (away from the top cell)

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "gyrofp/errors.hpp"
#include "gyrofp/velocity_grid.hpp"

namespace gyrofp {

struct Tridiagonal {
  std::vector<double> lower;  // lower[j] couples row j to j-1 (lower[0] unused)
  std::vector<double> diag;
  std::vector<double> upper;  // upper[j] couples row j to j+1 (upper[n-1] unused)

  std::size_t size() const { return diag.size(); }
};

class UOperator {
 public:
  UOperator(const VelocityGrid& grid, double nu, double beta) : nu_(nu), beta_(beta) {
    const std::size_t n = grid.size();
    if (n < 3) throw ConfigError("UOperator: need at least 3 velocity nodes, got " + std::to_string(n));
    if (!std::isfinite(nu) || nu < 0.0 || !std::isfinite(beta) || beta < 0.0) {
      throw ConfigError("UOperator: nu and beta must be finite and nonnegative");
    }
    weights_.assign(grid.weights(WeightKind::u_weight).begin(), grid.weights(WeightKind::u_weight).end());
    diffusion_ = {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    drift_ = diffusion_;
    double cumulative = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      cumulative += weights_[j];
      const double kappa = 2.0 * cumulative / grid.interface(j) / grid.spacing();
      // flux F = kappa (f_{j+1} - f_j) leaves cell j and enters cell j+1
      diffusion_.diag[j] -= kappa;
      diffusion_.upper[j] += kappa;
      diffusion_.diag[j + 1] -= kappa;
      diffusion_.lower[j + 1] += kappa;
      const double g = cumulative;  // 2 C_j times the 1/2 of the interface average
      drift_.diag[j] += g;
      drift_.upper[j] += g;
      drift_.diag[j + 1] -= g;
      drift_.lower[j + 1] -= g;
    }
    for (std::size_t j = 0; j < n; ++j) {
      diffusion_.lower[j] *= nu;
      diffusion_.diag[j] *= nu;
      diffusion_.upper[j] *= nu;
      drift_.lower[j] *= beta;
      drift_.diag[j] *= beta;
      drift_.upper[j] *= beta;
    }
  }

  std::size_t size() const { return weights_.size(); }
  double nu() const { return nu_; }
  double beta() const { return beta_; }
  std::span<const double> weights() const { return weights_; }

  /// Flux matrices S_nu and S_beta (D = W^{-1} (S_nu + S_beta)).
  const Tridiagonal& diffusion_flux() const { return diffusion_; }
  const Tridiagonal& drift_flux() const { return drift_; }

  /// out = D_nu f, D_beta f or their sum.
  template <class T>
  void apply(std::span<const T> f, std::span<T> out, bool diffusion = true, bool drift = true) const {
    check(f.size());
    check(out.size());
    const std::size_t n = size();
    for (std::size_t j = 0; j < n; ++j) {
      T acc{};
      auto add = [&](const Tridiagonal& m) {
        acc += m.diag[j] * f[j];
        if (j > 0) acc += m.lower[j] * f[j - 1];
        if (j + 1 < n) acc += m.upper[j] * f[j + 1];
      };
      if (diffusion) add(diffusion_);
      if (drift) add(drift_);
      out[j] = acc / weights_[j];
    }
  }

  /// Crank-Nicolson step of length tau for f' = D f, in place:
  ///   (W - tau/2 S) f_new = (W + tau/2 S) f_old.
  template <class T>
  void crank_nicolson(std::span<T> f, double tau) const {
    check(f.size());
    const std::size_t n = size();
    const double h = 0.5 * tau;
    if (scratch_tau_ != tau) factorize(h);
    std::vector<T>& rhs = rhs_buffer<T>();
    rhs.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double d = diffusion_.diag[j] + drift_.diag[j];
      T acc = (weights_[j] + h * d) * f[j];
      if (j > 0) acc += h * (diffusion_.lower[j] + drift_.lower[j]) * f[j - 1];
      if (j + 1 < n) acc += h * (diffusion_.upper[j] + drift_.upper[j]) * f[j + 1];
      rhs[j] = acc;
    }
    // forward sweep with the stored factorization, then back substitution
    rhs[0] = rhs[0] * inv_pivot_[0];
    for (std::size_t j = 1; j < n; ++j) rhs[j] = (rhs[j] - sub_[j] * rhs[j - 1]) * inv_pivot_[j];
    f[n - 1] = rhs[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) f[j] = rhs[j] - sup_[j] * f[j + 1];
    scratch_tau_ = tau;
  }

 private:
  void check(std::size_t n) const {
    if (n != size()) {
      throw ShapeError("UOperator: vector of length " + std::to_string(n) + " for " + std::to_string(size()) +
                       " nodes");
    }
  }

  // Thomas factorization of W - h S: sub_ are the lower entries, sup_ the
  // normalized upper entries, inv_pivot_ the reciprocal pivots.
  void factorize(double h) const {
    const std::size_t n = size();
    sub_.assign(n, 0.0);
    sup_.assign(n, 0.0);
    inv_pivot_.assign(n, 0.0);
    double previous_sup = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = j > 0 ? -h * (diffusion_.lower[j] + drift_.lower[j]) : 0.0;
      const double b = weights_[j] - h * (diffusion_.diag[j] + drift_.diag[j]);
      const double c = j + 1 < n ? -h * (diffusion_.upper[j] + drift_.upper[j]) : 0.0;
      const double pivot = b - a * previous_sup;
      if (!(std::abs(pivot) > 1e-300) || !std::isfinite(pivot)) {
        throw NumericalError("UOperator: zero pivot in implicit velocity solve at node " + std::to_string(j));
      }
      sub_[j] = a;
      inv_pivot_[j] = 1.0 / pivot;
      sup_[j] = c * inv_pivot_[j];
      previous_sup = sup_[j];
    }
  }

  template <class T>
  std::vector<T>& rhs_buffer() const {
    if constexpr (std::is_same_v<T, double>) {
      return real_rhs_;
    } else {
      return complex_rhs_;
    }
  }

  double nu_;
  double beta_;
  std::vector<double> weights_;
  Tridiagonal diffusion_;
  Tridiagonal drift_;
  mutable double scratch_tau_ = -1.0;
  mutable std::vector<double> sub_, sup_, inv_pivot_;
  mutable std::vector<double> real_rhs_;
  mutable std::vector<std::complex<double>> complex_rhs_;
};

inline UOperator build_u_operator(const VelocityGrid& grid, double nu, double beta) {
  return UOperator(grid, nu, beta);
}

}  // namespace gyrofp
