#pragma once
// Four-dimensional (x, u_vec) reference models.
//
// The distribution is modal in x (lattice [-K, K]^2) and nodal on a periodic
// Cartesian velocity box [-U, U)^2 with M x M nodes u_ab = (-U + a d, -U + b d).
// Two models share the machinery:
//
//   gyro   Field-free Vlasov-Fokker-Planck in gyro-coordinates x_g = x + v^perp,
//            d_t g + (1/eps) u^perp . grad_u g
//              = beta (div_u(u g) - u . grad_x^perp g) + nu |grad_u - grad_x^perp|^2 g
//          In x-Fourier space every term is diagonal in k, so x-modes evolve
//          independently and modes that start at zero are skipped.
//
//   vfp4d  The radially symmetric lift of the gyro-kinetic model,
//            d_t g + (J0_{|u|} grad Phi)^perp . grad_x g
//              = beta div_u(u g) + nu (Lap_x + Lap_u) g
//          with a fixed potential Phi.
//
// A step is the Strang composition R(dt/2) V(dt/2) E(dt) V(dt/2) R(dt/2):
// R rotates the velocity box by dt/(2 eps) through three spectral shears
// (identity in vfp4d), V is the diffusion propagator applied exactly in Fourier
// space, E is SSP-RK3 on the remaining explicit terms.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gyrofp/bessel.hpp"
#include "gyrofp/errors.hpp"
#include "gyrofp/fft.hpp"
#include "gyrofp/initial.hpp"
#include "gyrofp/norms.hpp"
#include "gyrofp/solver.hpp"
#include "gyrofp/spectral_field.hpp"
#include "gyrofp/velocity_grid.hpp"

namespace gyrofp {

enum class HarnessModel { gyro, vfp4d };

inline const char* to_string(HarnessModel m) { return m == HarnessModel::gyro ? "gyro" : "vfp4d"; }

/// Periodic Cartesian velocity box [-U, U)^2 with M nodes per side.
class VelocityBox {
 public:
  VelocityBox(int m, double half_width) : m_(m), U_(half_width) {
    if (m < 4 || m % 2 != 0) throw ConfigError("VelocityBox: M must be even and >= 4");
    if (!std::isfinite(half_width) || half_width <= 0.0) throw ConfigError("VelocityBox: U must be positive");
  }
  int size() const { return m_; }
  std::size_t points() const { return static_cast<std::size_t>(m_) * m_; }
  double half_width() const { return U_; }
  double spacing() const { return 2.0 * U_ / m_; }
  double node(int a) const { return -U_ + a * spacing(); }
  /// Signed frequency index of FFT slot p; the Nyquist slot maps to -M/2.
  int signed_index(int p) const { return p < m_ / 2 ? p : p - m_; }
  bool nyquist(int p) const { return p == m_ / 2; }
  double wavenumber(int p) const { return std::numbers::pi * signed_index(p) / U_; }
  bool operator==(const VelocityBox&) const = default;

 private:
  int m_;
  double U_;
};

struct HarnessParams {
  HarnessModel model = HarnessModel::gyro;
  double nu = 0.05;
  double beta = 0.1;
  double epsilon = 0.1;  // gyro model only
  int K = 1;
  int M = 48;
  double U = 6.0;
};

struct Gyro4DState {
  HarnessParams params;
  ModeLattice lattice;
  VelocityBox box;
  std::vector<Complex> data;  // (mode, a, b) row-major
  std::vector<char> active;   // modes that are evolved
  double time = 0.0;
  long step_count = 0;

  explicit Gyro4DState(const HarnessParams& p)
      : params(p), lattice(p.K), box(p.M, p.U), data(lattice.count() * box.points()), active(lattice.count(), 1) {}

  std::span<Complex> mode(std::size_t i) { return {data.data() + i * box.points(), box.points()}; }
  std::span<const Complex> mode(std::size_t i) const { return {data.data() + i * box.points(), box.points()}; }
  Complex& at(std::size_t i, int a, int b) { return data[i * box.points() + static_cast<std::size_t>(a) * box.size() + b]; }

  /// int g dx du over the torus and the box.
  double mass() const {
    double sum = 0.0;
    for (const auto& c : mode(lattice.zero())) sum += c.real();
    return kTorusArea * box.spacing() * box.spacing() * sum;
  }

  /// Marks modes that are identically zero as inactive (valid when modes decouple).
  void deactivate_zero_modes() {
    for (std::size_t i = 0; i < lattice.count(); ++i) {
      const auto m = mode(i);
      active[i] = std::any_of(m.begin(), m.end(), [](const Complex& c) { return c != Complex{}; }) ? 1 : 0;
    }
  }

  bool all_finite() const {
    return std::all_of(data.begin(), data.end(),
                       [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
  }
};

/// Fills g(x, u_vec) = profile(u_vec) * (1 + sum_m a_m cos(k_m . x + phase_m)).
template <class Profile>
void fill_separable(Gyro4DState& s, Profile&& profile, const std::vector<ModePerturbation>& modes) {
  std::fill(s.data.begin(), s.data.end(), Complex{});
  const int M = s.box.size();
  for (int a = 0; a < M; ++a) {
    for (int b = 0; b < M; ++b) {
      const double value = profile(s.box.node(a), s.box.node(b));
      s.at(s.lattice.zero(), a, b) = value;
      for (const auto& m : modes) {
        if (std::abs(m.k1) > s.lattice.truncation() || std::abs(m.k2) > s.lattice.truncation()) {
          throw ConfigError("fill_separable: mode outside the harness truncation");
        }
        const Complex c = 0.5 * m.amplitude * std::polar(1.0, m.phase) * value;
        s.at(s.lattice.index(m.k1, m.k2), a, b) += c;
        s.at(s.lattice.index(-m.k1, -m.k2), a, b) += std::conj(c);
      }
    }
  }
}

class Harness4D {
 public:
  explicit Harness4D(const HarnessParams& p, std::optional<SpectralField2D> phi = std::nullopt)
      : p_(p),
        lattice_(p.K),
        box_(p.M, p.U),
        fft_(p.M),
        along_a_(p.M, p.M, p.M, 1),
        along_b_(p.M, p.M, 1, p.M),
        phi_(std::move(phi)) {
    if (!std::isfinite(p.nu) || p.nu < 0.0 || !std::isfinite(p.beta) || p.beta < 0.0) {
      throw ConfigError("Harness4D: nu and beta must be finite and >= 0");
    }
    if (p.model == HarnessModel::gyro && !(p.epsilon > 0.0)) throw ConfigError("Harness4D: epsilon must be > 0");
    if (phi_) {
      if (p.model != HarnessModel::vfp4d) throw ConfigError("Harness4D: a potential is only supported in vfp4d");
      if (phi_->truncation() != p.K) throw ShapeError("Harness4D: potential truncation mismatch");
      phi_->set_zero_mean(true);
      build_drift_cache();
    }
  }

  const HarnessParams& params() const { return p_; }
  const VelocityBox& box() const { return box_; }

  Gyro4DState make_state() const { return Gyro4DState(p_); }

  void step(Gyro4DState& s, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("step_4d: dt must be positive");
    if (!(s.box == box_) || !(s.lattice == lattice_)) throw ShapeError("step_4d: state shape mismatch");
    const bool gyro = p_.model == HarnessModel::gyro;
    if (gyro) rotate(s, 0.5 * dt / p_.epsilon);
    diffuse(s, 0.5 * dt);
    explicit_stage(s, dt);
    diffuse(s, 0.5 * dt);
    if (gyro) rotate(s, 0.5 * dt / p_.epsilon);
    s.time += dt;
    ++s.step_count;
  }

  /// Rotates every active mode counterclockwise by theta: g <- g o R(-theta).
  void rotate(Gyro4DState& s, double theta) {
    theta = std::remainder(theta, 2.0 * std::numbers::pi);
    if (theta == 0.0) return;
    const bool flip = std::abs(theta) > 0.5 * std::numbers::pi;
    if (flip) theta -= std::copysign(std::numbers::pi, theta);
    const double alpha = -theta;
    const double t = -std::tan(0.5 * alpha);
    const double sn = std::sin(alpha);
    for (std::size_t i = 0; i < lattice_.count(); ++i) {
      if (!s.active[i]) continue;
      auto g = s.mode(i);
      if (flip) point_reflect(g);
      shear(g, t, true);
      shear(g, sn, false);
      shear(g, t, true);
    }
  }

  /// Exact diffusion propagator over tau.
  void diffuse(Gyro4DState& s, double tau) {
    if (p_.nu == 0.0) return;
    const int M = box_.size();
    auto buf = fft_.buffer();
    const double norm = 1.0 / static_cast<double>(box_.points());
    for (std::size_t i = 0; i < lattice_.count(); ++i) {
      if (!s.active[i]) continue;
      const double k1 = lattice_.k1(i);
      const double k2 = lattice_.k2(i);
      auto g = s.mode(i);
      std::copy(g.begin(), g.end(), buf.begin());
      fft_.forward();
      for (int p = 0; p < M; ++p) {
        for (int q = 0; q < M; ++q) {
          Complex& c = buf[static_cast<std::size_t>(p) * M + q];
          if (box_.nyquist(p) || box_.nyquist(q)) {
            c = 0.0;
            continue;
          }
          const double e1 = box_.wavenumber(p);
          const double e2 = box_.wavenumber(q);
          double rate;
          if (p_.model == HarnessModel::gyro) {
            // grad_v = grad_u - grad_x^perp, k^perp = (-k2, k1)
            const double d1 = e1 + k2;
            const double d2 = e2 - k1;
            rate = d1 * d1 + d2 * d2;
          } else {
            rate = e1 * e1 + e2 * e2 + k1 * k1 + k2 * k2;
          }
          c *= norm * std::exp(-p_.nu * rate * tau);
        }
      }
      fft_.backward();
      std::copy(buf.begin(), buf.end(), g.begin());
    }
  }

  /// Explicit right-hand side: beta terms plus, in vfp4d with a potential, advection.
  void explicit_rhs(const Gyro4DState& s, Gyro4DState& out) {
    std::fill(out.data.begin(), out.data.end(), Complex{});
    if (p_.beta != 0.0) {
      for (std::size_t i = 0; i < lattice_.count(); ++i) {
        if (!s.active[i]) continue;
        beta_term(s.mode(i), out.mode(i), lattice_.k1(i), lattice_.k2(i));
      }
    }
    if (phi_) advection(s, out);
  }

 private:
  void explicit_stage(Gyro4DState& s, double dt) {
    if (p_.beta == 0.0 && !phi_) return;
    Gyro4DState k(p_);
    k.active = s.active;
    Gyro4DState y1 = s;
    explicit_rhs(s, k);
    for (std::size_t n = 0; n < s.data.size(); ++n) y1.data[n] = s.data[n] + dt * k.data[n];
    Gyro4DState y2 = y1;
    explicit_rhs(y1, k);
    for (std::size_t n = 0; n < s.data.size(); ++n) {
      y2.data[n] = 0.75 * s.data[n] + 0.25 * (y1.data[n] + dt * k.data[n]);
    }
    explicit_rhs(y2, k);
    for (std::size_t n = 0; n < s.data.size(); ++n) {
      s.data[n] = (1.0 / 3.0) * s.data[n] + (2.0 / 3.0) * (y2.data[n] + dt * k.data[n]);
    }
  }

  // beta [div_u(u g) - i (u . k^perp) g] in gyro, beta div_u(u g) in vfp4d.
  // The divergence is the spectral derivative of the flux, so sum_ab of it is 0.
  void beta_term(std::span<const Complex> g, std::span<Complex> out, int k1, int k2) {
    const int M = box_.size();
    auto buf = fft_.buffer();
    std::vector<Complex> flux2(box_.points());
    for (int a = 0; a < M; ++a) {
      for (int b = 0; b < M; ++b) {
        const std::size_t n = static_cast<std::size_t>(a) * M + b;
        buf[n] = box_.node(a) * g[n];
      }
    }
    fft_.forward();
    std::vector<Complex> spec1(buf.begin(), buf.end());
    for (int a = 0; a < M; ++a) {
      for (int b = 0; b < M; ++b) {
        const std::size_t n = static_cast<std::size_t>(a) * M + b;
        buf[n] = box_.node(b) * g[n];
      }
    }
    fft_.forward();
    const Complex I{0.0, 1.0};
    const double norm = 1.0 / static_cast<double>(box_.points());
    for (int p = 0; p < M; ++p) {
      for (int q = 0; q < M; ++q) {
        const std::size_t n = static_cast<std::size_t>(p) * M + q;
        const double e1 = box_.nyquist(p) ? 0.0 : box_.wavenumber(p);
        const double e2 = box_.nyquist(q) ? 0.0 : box_.wavenumber(q);
        buf[n] = norm * I * (e1 * spec1[n] + e2 * buf[n]);
      }
    }
    fft_.backward();
    const bool gyro = p_.model == HarnessModel::gyro;
    for (int a = 0; a < M; ++a) {
      for (int b = 0; b < M; ++b) {
        const std::size_t n = static_cast<std::size_t>(a) * M + b;
        Complex v = buf[n];
        if (gyro && (k1 != 0 || k2 != 0)) {
          const double dot = -box_.node(a) * k2 + box_.node(b) * k1;  // u . k^perp
          v -= I * dot * g[n];
        }
        out[n] += p_.beta * v;
      }
    }
  }

  // out += -(J0_{|u|} grad Phi)^perp . grad_x g, per velocity node.
  void advection(const Gyro4DState& s, Gyro4DState& out) {
    const std::size_t count = lattice_.count();
    const std::size_t P = box_.points();
    std::vector<Complex> modes(count), c(count), d(count);
    std::vector<double> gx(xform_->points()), prod(xform_->points());
    const Complex I{0.0, 1.0};
    for (std::size_t n = 0; n < P; ++n) {
      const std::size_t slot = drift_slot_[n];
      const double* v1 = drift_.data() + (2 * slot) * xform_->points();
      const double* v2 = drift_.data() + (2 * slot + 1) * xform_->points();
      bool any = false;
      for (std::size_t i = 0; i < count; ++i) {
        modes[i] = s.data[i * P + n];
        any = any || modes[i] != Complex{};
        c[i] = I * static_cast<double>(lattice_.k1(i)) * modes[i];
        d[i] = I * static_cast<double>(lattice_.k2(i)) * modes[i];
      }
      if (!any) continue;
      xform_->to_physical(c, gx);
      for (std::size_t q = 0; q < gx.size(); ++q) prod[q] = -v1[q] * gx[q];
      xform_->to_physical(d, gx);
      for (std::size_t q = 0; q < gx.size(); ++q) prod[q] -= v2[q] * gx[q];
      xform_->to_modal(prod, modes);
      for (std::size_t i = 0; i < count; ++i) out.data[i * P + n] += modes[i];
    }
  }

  // Physical drift fields for every distinct |u| on the box.
  void build_drift_cache() {
    xform_ = std::make_unique<TorusTransform>(p_.K);
    const int M = box_.size();
    std::map<long, std::size_t> slot_of;
    drift_slot_.resize(box_.points());
    std::vector<double> radius;
    for (int a = 0; a < M; ++a) {
      for (int b = 0; b < M; ++b) {
        const long ia = a - M / 2;
        const long ib = b - M / 2;
        auto [it, fresh] = slot_of.emplace(ia * ia + ib * ib, radius.size());
        if (fresh) radius.push_back(std::hypot(box_.node(a), box_.node(b)));
        drift_slot_[static_cast<std::size_t>(a) * M + b] = it->second;
      }
    }
    const std::size_t G = xform_->points();
    drift_.assign(2 * radius.size() * G, 0.0);
    for (std::size_t r = 0; r < radius.size(); ++r) {
      auto [v1, v2] = drift_velocity(*phi_, radius[r]);
      xform_->to_physical(v1.coefficients(), std::span<double>(drift_.data() + 2 * r * G, G));
      xform_->to_physical(v2.coefficients(), std::span<double>(drift_.data() + (2 * r + 1) * G, G));
    }
  }

  // g(u) <- g(-u): exact rotation by pi on the periodic lattice.
  void point_reflect(std::span<Complex> g) const {
    const int M = box_.size();
    std::vector<Complex> tmp(g.begin(), g.end());
    for (int a = 0; a < M; ++a) {
      for (int b = 0; b < M; ++b) {
        g[static_cast<std::size_t>(a) * M + b] = tmp[static_cast<std::size_t>((M - a) % M) * M + (M - b) % M];
      }
    }
  }

  // along_first: g(u1, u2) <- g(u1 + s u2, u2); otherwise g(u1, u2) <- g(u1, u2 + s u1).
  void shear(std::span<Complex> g, double s, bool along_first) {
    if (s == 0.0) return;
    const int M = box_.size();
    StridedFft& fft = along_first ? along_a_ : along_b_;
    auto buf = fft.buffer();
    std::copy(g.begin(), g.end(), buf.begin());
    fft.forward();
    const double norm = 1.0 / M;
    for (int line = 0; line < M; ++line) {
      const double shift = s * box_.node(line);
      for (int p = 0; p < M; ++p) {
        const std::size_t n = along_first ? static_cast<std::size_t>(p) * M + line
                                          : static_cast<std::size_t>(line) * M + p;
        if (box_.nyquist(p)) {
          buf[n] = 0.0;
        } else {
          buf[n] *= norm * std::polar(1.0, box_.wavenumber(p) * shift);
        }
      }
    }
    fft.backward();
    std::copy(buf.begin(), buf.end(), g.begin());
  }

  HarnessParams p_;
  ModeLattice lattice_;
  VelocityBox box_;
  ComplexFft2D fft_;
  StridedFft along_a_;
  StridedFft along_b_;
  std::optional<SpectralField2D> phi_;
  std::unique_ptr<TorusTransform> xform_;
  std::vector<std::size_t> drift_slot_;
  std::vector<double> drift_;
};

/// Angular harmonics of the trigonometric interpolant on circles of radius u_j:
///   average  (1/2 pi) int g(u e^{i phi}) d phi             = sum_eta g(eta) J0(|eta| u)
///   first    (1/2 pi) int g(u e^{i phi}) e^{-i phi} d phi  = sum_eta g(eta) i J1(|eta| u) e^{-i phi_eta}
/// with g(eta) the interpolant's coefficients; the Nyquist line is dropped.
class AngularProjector {
 public:
  AngularProjector(const VelocityBox& box, std::shared_ptr<const VelocityGrid> grid)
      : box_(box), grid_(std::move(grid)), fft_(box.size()) {
    const int M = box_.size();
    const std::size_t nu = grid_->size();
    std::map<long, std::size_t> slot_of;
    slot_.assign(box_.points(), kSkip);
    std::vector<double> mag;
    for (int p = 0; p < M; ++p) {
      for (int q = 0; q < M; ++q) {
        if (box_.nyquist(p) || box_.nyquist(q)) continue;
        const long ip = box_.signed_index(p);
        const long iq = box_.signed_index(q);
        auto [it, fresh] = slot_of.emplace(ip * ip + iq * iq, mag.size());
        if (fresh) mag.push_back(std::hypot(box_.wavenumber(p), box_.wavenumber(q)));
        slot_[static_cast<std::size_t>(p) * M + q] = it->second;
      }
    }
    j0_.resize(mag.size() * nu);
    j1_.resize(mag.size() * nu);
    for (std::size_t s = 0; s < mag.size(); ++s) {
      for (std::size_t j = 0; j < nu; ++j) {
        j0_[s * nu + j] = bessel::j0(mag[s] * grid_->node(j));
        j1_[s * nu + j] = bessel::j1(mag[s] * grid_->node(j));
      }
    }
  }

  const VelocityGrid& grid() const { return *grid_; }

  /// Gyrophase average of every x-mode on the 1D grid.
  GyroDistribution average(const Gyro4DState& s) { return project(s, 0); }

  /// First angular harmonic of every x-mode on the 1D grid.
  GyroDistribution first_harmonic(const Gyro4DState& s) { return project(s, 1); }

 private:
  static constexpr std::size_t kSkip = static_cast<std::size_t>(-1);

  GyroDistribution project(const Gyro4DState& s, int order) {
    if (!(s.box == box_)) throw ShapeError("AngularProjector: velocity box mismatch");
    GyroDistribution out(s.lattice.truncation(), grid_);
    const int M = box_.size();
    const std::size_t nu = grid_->size();
    auto buf = fft_.buffer();
    const double norm = 1.0 / static_cast<double>(box_.points());
    const Complex I{0.0, 1.0};
    for (std::size_t i = 0; i < s.lattice.count(); ++i) {
      if (!s.active[i]) continue;
      const auto g = s.mode(i);
      std::copy(g.begin(), g.end(), buf.begin());
      fft_.forward();
      auto target = out.mode(i);
      for (int p = 0; p < M; ++p) {
        for (int q = 0; q < M; ++q) {
          const std::size_t n = static_cast<std::size_t>(p) * M + q;
          if (slot_[n] == kSkip) continue;
          // node offset -U contributes the sign (-1)^(p + q)
          const double sign = ((box_.signed_index(p) + box_.signed_index(q)) % 2 == 0) ? 1.0 : -1.0;
          Complex c = sign * norm * buf[n];
          if (order == 0) {
            const double* t = j0_.data() + slot_[n] * nu;
            for (std::size_t j = 0; j < nu; ++j) target[j] += c * t[j];
          } else {
            const double e1 = box_.wavenumber(p);
            const double e2 = box_.wavenumber(q);
            const double r = std::hypot(e1, e2);
            if (r == 0.0) continue;
            c *= I * Complex(e1, -e2) / r;
            const double* t = j1_.data() + slot_[n] * nu;
            for (std::size_t j = 0; j < nu; ++j) target[j] += c * t[j];
          }
        }
      }
    }
    return out;
  }

  VelocityBox box_;
  std::shared_ptr<const VelocityGrid> grid_;
  ComplexFft2D fft_;
  std::vector<std::size_t> slot_;
  std::vector<double> j0_;
  std::vector<double> j1_;
};

inline GyroDistribution angular_average(const Gyro4DState& s, std::shared_ptr<const VelocityGrid> grid) {
  AngularProjector proj(s.box, std::move(grid));
  return proj.average(s);
}

// ---------------------------------------------------------------------------
// epsilon sweep

struct SweepConfig {
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  double nu = 0.05;
  double beta = 0.1;
  int K = 1;
  int M = 48;
  double U = 6.0;
  double t_end = 1.2 * std::numbers::pi;  // three rotation periods of eps = 0.2, an integer number for each eps
  double steps_per_epsilon = 10.0;  // dt <= eps / steps_per_epsilon
  double dt_max = 0.02;
  std::array<double, 2> center{0.5, 0.0};  // drifting Maxwellian exp(-|u - c|^2 / T0)
  double T0 = 1.0;
  double x_amplitude = 0.5;                // (1 + a cos x1)
  double mollifier_width = 0.25;           // time-test-function width for the l = 1 measurement
  std::size_t limit_nodes = 512;           // 1D reference grid
  std::size_t diagnostic_nodes = 48;       // grid for l = 1 norms
  double slack = 0.1;
};

struct SweepEntry {
  double epsilon = 0.0;
  double error = 0.0;              // || <g_eps(t_end)> - f_limit(t_end) ||_{2,u}
  double l1_instant = 0.0;         // || l = 1 harmonic at t_end ||_{2,u}
  double l1_mollified = 0.0;       // same, tested against the time mollifier ending at t_end
  double mass_drift = 0.0;
  long steps = 0;
  double seconds = 0.0;
};

struct SweepReport {
  std::vector<SweepEntry> entries;
  bool error_monotone = true;      // e(next) <= (1 + slack) e(prev)
  bool error_strict = true;        // e(next) < e(prev)
  bool l1_decreasing = true;       // mollified l = 1 norm strictly decreasing
  std::string message;
};

namespace detail {

inline double norm_2u_complex(const GyroDistribution& f) { return weighted_l2_norm(f, WeightKind::u_weight); }

}  // namespace detail

/// Solution of the gyrophase-averaged limit equation from the averaged initial data.
inline GyroDistribution limit_solution(const GyroDistribution& initial, double nu, double beta, double t_end,
                                       double dt_max) {
  PhysicalParams p;
  p.nu = nu;
  p.beta = beta;
  p.K = initial.truncation();
  p.N_u = initial.nu();
  p.u_max = initial.grid().u_max();
  SpectralField2D zero(p.K, true);
  Solver solver(p, zero, 0.4, dt_max);
  SolverState state{initial, 0.0, p, 0};
  const long n = std::max<long>(1, static_cast<long>(std::ceil(t_end / dt_max - 1e-9)));
  const double dt = t_end / static_cast<double>(n);
  for (long s = 0; s < n; ++s) solver.advance(state, dt);
  return state.f;
}

inline SweepReport epsilon_sweep(const SweepConfig& cfg) {
  if (cfg.epsilons.empty()) throw ConfigError("epsilon_sweep: empty epsilon list");
  SweepReport report;
  auto limit_grid = std::make_shared<const VelocityGrid>(cfg.limit_nodes, cfg.U);
  auto diag_grid = std::make_shared<const VelocityGrid>(cfg.diagnostic_nodes, cfg.U);
  const std::vector<ModePerturbation> modes{{1, 0, cfg.x_amplitude, 0.0}};
  auto profile = [&](double u1, double u2) {
    const double d1 = u1 - cfg.center[0];
    const double d2 = u2 - cfg.center[1];
    return std::exp(-(d1 * d1 + d2 * d2) / cfg.T0);
  };

  std::optional<GyroDistribution> f_limit;
  const double window = 8.0 * cfg.mollifier_width;
  const double t_mid = cfg.t_end - 0.5 * window;
  if (window >= cfg.t_end) throw ConfigError("epsilon_sweep: t_end must exceed the l = 1 test window");

  for (double eps : cfg.epsilons) {
    if (!(eps > 0.0)) throw ConfigError("epsilon_sweep: epsilon must be > 0");
    const auto started = std::chrono::steady_clock::now();
    HarnessParams hp;
    hp.model = HarnessModel::gyro;
    hp.nu = cfg.nu;
    hp.beta = cfg.beta;
    hp.epsilon = eps;
    hp.K = cfg.K;
    hp.M = cfg.M;
    hp.U = cfg.U;
    Harness4D harness(hp);
    Gyro4DState s = harness.make_state();
    fill_separable(s, profile, modes);
    s.deactivate_zero_modes();
    const double m0 = s.mass();
    AngularProjector limit_proj(s.box, limit_grid);
    AngularProjector diag_proj(s.box, diag_grid);
    if (!f_limit) {
      f_limit = limit_solution(limit_proj.average(s), cfg.nu, cfg.beta, cfg.t_end,
                               std::min(cfg.dt_max, 0.1 * cfg.epsilons.back()));
    }

    const double dt_target = std::min(cfg.dt_max, eps / cfg.steps_per_epsilon);
    const long n = static_cast<long>(std::ceil(cfg.t_end / dt_target - 1e-9));
    const double dt = cfg.t_end / static_cast<double>(n);
    GyroDistribution mollified(cfg.K, diag_grid);
    double weight_sum = 0.0;
    auto accumulate = [&](double t, double quad_weight) {
      const double z = (t - t_mid) / cfg.mollifier_width;
      if (std::abs(z) > 4.0 + 1e-12) return;
      const double w = quad_weight * std::exp(-0.5 * z * z);
      GyroDistribution h = diag_proj.first_harmonic(s);
      auto out = mollified.data();
      const auto in = h.data();
      for (std::size_t q = 0; q < out.size(); ++q) out[q] += w * in[q];
      weight_sum += w;
    };
    accumulate(0.0, 0.5 * dt);
    for (long k = 1; k <= n; ++k) {
      harness.step(s, dt);
      accumulate(s.time, k == n ? 0.5 * dt : dt);
    }
    if (!s.all_finite()) throw NumericalError("epsilon_sweep: non-finite harness state");
    mollified *= 1.0 / weight_sum;

    SweepEntry e;
    e.epsilon = eps;
    GyroDistribution diff = limit_proj.average(s);
    diff -= *f_limit;
    e.error = detail::norm_2u_complex(diff);
    e.l1_instant = detail::norm_2u_complex(diag_proj.first_harmonic(s));
    e.l1_mollified = detail::norm_2u_complex(mollified);
    e.mass_drift = std::abs(s.mass() - m0) / std::abs(m0);
    e.steps = n;
    e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report.entries.push_back(e);
  }
  for (std::size_t i = 1; i < report.entries.size(); ++i) {
    const auto& prev = report.entries[i - 1];
    const auto& next = report.entries[i];
    if (next.error > (1.0 + cfg.slack) * prev.error) report.error_monotone = false;
    if (!(next.error < prev.error)) report.error_strict = false;
    if (!(next.l1_mollified < prev.l1_mollified)) report.l1_decreasing = false;
  }
  if (!report.error_monotone) report.message = "convergence failure: e(eps) grows beyond the allowed slack";
  return report;
}

// ---------------------------------------------------------------------------
// radial equivalence between the 4D lift and the 1D-in-u solver

struct RadialConfig {
  double nu = 0.05;
  double beta = 0.05;
  int K = 4;
  double U = 5.0;
  double T0 = 1.0;
  double t_end = 1.0;
  std::vector<ModePerturbation> phi_modes{{1, 0, 0.6, 0.0}, {0, 1, 0.4, 0.3}, {1, 1, 0.2, 1.1}};
  std::vector<ModePerturbation> f_modes{{1, 0, 0.3, 0.0}, {1, -1, 0.2, 0.7}};
  // coarse level; each further level doubles N_u and M and halves dt
  std::size_t N_u = 16;
  int M = 24;
  double dt = 0.02;
  int levels = 2;
};

struct RadialLevel {
  std::size_t N_u = 0;
  int M = 0;
  double dt = 0.0;
  double error = 0.0;      // || <g_4D> - f_1D ||_{2,u}
  double reference = 0.0;  // || f_1D ||_{2,u}
  double seconds = 0.0;
};

struct RadialReport {
  std::vector<RadialLevel> levels;
  double ratio(std::size_t i) const { return levels[i - 1].error / levels[i].error; }
};

inline SpectralField2D make_potential(int K, const std::vector<ModePerturbation>& modes) {
  SpectralField2D phi(K, true);
  for (const auto& m : modes) phi.set_mode(m.k1, m.k2, phi(m.k1, m.k2) + 0.5 * m.amplitude * std::polar(1.0, m.phase));
  return phi;
}

inline RadialReport radial_equivalence(const RadialConfig& cfg) {
  RadialReport report;
  const SpectralField2D phi = make_potential(cfg.K, cfg.phi_modes);
  for (int level = 0; level < cfg.levels; ++level) {
    const auto started = std::chrono::steady_clock::now();
    RadialLevel L;
    L.N_u = cfg.N_u << level;
    L.M = cfg.M << level;
    L.dt = cfg.dt / static_cast<double>(1 << level);
    const long n = static_cast<long>(std::llround(cfg.t_end / L.dt));

    HarnessParams hp;
    hp.model = HarnessModel::vfp4d;
    hp.nu = cfg.nu;
    hp.beta = cfg.beta;
    hp.K = cfg.K;
    hp.M = L.M;
    hp.U = cfg.U;
    Harness4D harness(hp, phi);
    Gyro4DState s = harness.make_state();
    fill_separable(s, [&](double u1, double u2) { return std::exp(-(u1 * u1 + u2 * u2) / cfg.T0); }, cfg.f_modes);
    for (long k = 0; k < n; ++k) harness.step(s, L.dt);

    PhysicalParams p;
    p.nu = cfg.nu;
    p.beta = cfg.beta;
    p.K = cfg.K;
    p.N_u = L.N_u;
    p.u_max = cfg.U;
    Solver solver(p, phi, 0.4, L.dt);
    SolverState st = make_state(p);
    fill_perturbed_maxwellian(st.f, cfg.T0, cfg.f_modes);
    for (long k = 0; k < n; ++k) solver.advance(st, L.dt);

    GyroDistribution avg = angular_average(s, solver.grid());
    L.reference = weighted_l2_norm(st.f, WeightKind::u_weight);
    avg -= st.f;
    L.error = weighted_l2_norm(avg, WeightKind::u_weight);
    L.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report.levels.push_back(L);
  }
  return report;
}

}  // namespace gyrofp
