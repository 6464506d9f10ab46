#pragma once
// Time integration of the gyro-kinetic Fokker-Planck system on the torus.
//
// One step of length dt is the Strang composition
//   U(dt/2) X(dt/2) A(dt) X(dt/2) U(dt/2)
// with U the Crank-Nicolson solve of the velocity operator, X the exact
// x-diffusion factor exp(-nu |k|^2 t), and A two SSP-RK2 stages of the E x B
// advection with the potential recomputed from f at each stage.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gyrofp/diagnostics.hpp"
#include "gyrofp/errors.hpp"
#include "gyrofp/fft.hpp"
#include "gyrofp/spectral_ops.hpp"
#include "gyrofp/u_operator.hpp"

namespace gyrofp {

struct PhysicalParams {
  double nu = 0.01;
  double beta = 0.1;
  double T = 1.0;
  int K = 32;
  std::size_t N_u = 32;
  double u_max = 6.0;

  void validate() const {
    auto finite_nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };
    if (!finite_nonneg(nu)) throw ConfigError("nu must be finite and >= 0");
    if (!finite_nonneg(beta)) throw ConfigError("beta must be finite and >= 0");
    if (!std::isfinite(T) || T <= 0.0) throw ConfigError("T must be finite and > 0");
    if (K < 1) throw ConfigError("K must be >= 1");
    if (N_u < 3) throw ConfigError("N_u must be >= 3");
    if (!std::isfinite(u_max) || u_max <= 0.0) throw ConfigError("u_max must be finite and > 0");
  }
  bool operator==(const PhysicalParams&) const = default;
};

struct SolverState {
  GyroDistribution f;
  double time = 0.0;
  PhysicalParams params;
  long step_count = 0;
};

inline SolverState make_state(const PhysicalParams& params) {
  params.validate();
  auto grid = std::make_shared<const VelocityGrid>(params.N_u, params.u_max);
  return SolverState{GyroDistribution(params.K, grid), 0.0, params, 0};
}

class Solver {
 public:
  /// With `frozen_phi` set the potential is that field at all times instead of
  /// the electroneutral response to f.
  explicit Solver(const PhysicalParams& params, std::optional<SpectralField2D> frozen_phi = std::nullopt,
                  double courant = 0.4, double dt_max = 0.05)
      : params_(params),
        grid_(std::make_shared<const VelocityGrid>((params.validate(), params.N_u), params.u_max)),
        table_(params.K, params.T, grid_),
        uop_(*grid_, params.nu, params.beta),
        transform_(params.K),
        frozen_(std::move(frozen_phi)),
        courant_(courant),
        dt_max_(dt_max) {
    if (frozen_) {
      if (frozen_->truncation() != params.K) throw ShapeError("Solver: frozen potential truncation mismatch");
      frozen_->set_zero_mean(true);
    }
    if (!(courant > 0.0) || !(dt_max > 0.0)) throw ConfigError("Solver: courant and dt_max must be positive");
    values_.resize(transform_.points());
    v1_.resize(transform_.points());
    v2_.resize(transform_.points());
    grad_.resize(transform_.points());
  }

  const PhysicalParams& params() const { return params_; }
  const std::shared_ptr<const VelocityGrid>& grid() const { return grid_; }
  const MultiplierTable& table() const { return table_; }
  const UOperator& u_operator() const { return uop_; }
  TorusTransform& transform() { return transform_; }
  double courant() const { return courant_; }
  double dt_max() const { return dt_max_; }
  bool frozen() const { return frozen_.has_value(); }

  SpectralField2D density(const GyroDistribution& f) const { return compute_density(f, table_); }

  SpectralField2D potential(const GyroDistribution& f) const {
    if (frozen_) return *frozen_;
    return solve_potential(density(f), table_);
  }

  /// -(J0_u grad Phi)^perp . grad_x f per velocity node, dealiased.
  GyroDistribution advection_rhs(const GyroDistribution& f, const SpectralField2D& phi) {
    check(f);
    GyroDistribution out(f.truncation(), grid_);
    if (is_zero(phi)) return out;
    const auto& lat = f.lattice();
    const std::size_t count = lat.count();
    std::vector<Complex> a(count), b(count), c(count), d(count);
    const Complex I{0.0, 1.0};
    for (std::size_t j = 0; j < f.nu(); ++j) {
      for (std::size_t i = 0; i < count; ++i) {
        const double k1 = lat.k1(i);
        const double k2 = lat.k2(i);
        const Complex g = table_.j0(i, j) * phi[i];
        a[i] = -I * k2 * g;
        b[i] = I * k1 * g;
      }
      transform_.to_physical(a, v1_);
      transform_.to_physical(b, v2_);
      for (std::size_t i = 0; i < count; ++i) {
        const Complex fij = f.mode(i)[j];
        c[i] = I * static_cast<double>(lat.k1(i)) * fij;
        d[i] = I * static_cast<double>(lat.k2(i)) * fij;
      }
      transform_.to_physical(c, grad_);
      for (std::size_t p = 0; p < values_.size(); ++p) values_[p] = -v1_[p] * grad_[p];
      transform_.to_physical(d, grad_);
      for (std::size_t p = 0; p < values_.size(); ++p) values_[p] -= v2_[p] * grad_[p];
      transform_.to_modal(values_, a);
      for (std::size_t i = 0; i < count; ++i) out.mode(i)[j] = a[i];
    }
    return out;
  }

  /// Largest |J0_u grad Phi| over the dealiased grid and all velocity nodes.
  double max_drift(const SpectralField2D& phi) {
    if (is_zero(phi)) return 0.0;
    const auto& lat = phi.lattice();
    std::vector<Complex> a(lat.count()), b(lat.count());
    const Complex I{0.0, 1.0};
    double vmax = 0.0;
    for (std::size_t j = 0; j < grid_->size(); ++j) {
      for (std::size_t i = 0; i < lat.count(); ++i) {
        const Complex g = table_.j0(i, j) * phi[i];
        a[i] = -I * static_cast<double>(lat.k2(i)) * g;
        b[i] = I * static_cast<double>(lat.k1(i)) * g;
      }
      transform_.to_physical(a, v1_);
      transform_.to_physical(b, v2_);
      for (std::size_t p = 0; p < v1_.size(); ++p) vmax = std::max(vmax, std::hypot(v1_[p], v2_[p]));
    }
    return vmax;
  }

  /// courant * dx / max drift, capped at dt_max.
  double cfl_dt(const SolverState& state) {
    const double vmax = max_drift(potential(state.f));
    if (!(vmax > 0.0)) return dt_max_;
    return std::min(dt_max_, courant_ * transform_.spacing() / vmax);
  }

  /// Advances the state by dt; throws RejectedStepError when dt exceeds cfl_dt.
  void step(SolverState& state, double dt) {
    const double limit = cfl_dt(state);
    if (dt > limit * (1.0 + 1e-12)) {
      throw RejectedStepError("step: dt = " + std::to_string(dt) + " exceeds the CFL limit " + std::to_string(limit),
                              dt, limit);
    }
    advance(state, dt);
  }

  /// step() without the CFL check; the caller guarantees dt <= cfl_dt(state).
  void advance(SolverState& state, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("step: dt must be positive and finite");
    check(state.f);
    GyroDistribution& f = state.f;
    velocity_half_step(f, dt);
    diffusion_half_step(f, dt);
    {
      GyroDistribution stage = f;
      GyroDistribution rhs = advection_rhs(stage, potential(stage));
      axpy(stage, dt, rhs);
      rhs = advection_rhs(stage, potential(stage));
      axpy(stage, dt, rhs);
      for (std::size_t p = 0; p < f.data().size(); ++p) f.data()[p] = 0.5 * (f.data()[p] + stage.data()[p]);
    }
    diffusion_half_step(f, dt);
    velocity_half_step(f, dt);
    state.time += dt;
    ++state.step_count;
  }

  DiagnosticsRecord record(const SolverState& state) {
    if (!quartic_) quartic_ = std::make_unique<TorusTransform>(params_.K, dealiased_size(params_.K, 4));
    const SpectralField2D rho = density(state.f);
    const SpectralField2D phi = potential(state.f);
    return compute_record(state.time, state.f, rho, phi, *quartic_);
  }

 private:
  static bool is_zero(const SpectralField2D& phi) {
    const auto c = phi.coefficients();
    return std::all_of(c.begin(), c.end(), [](const Complex& z) { return z == Complex{}; });
  }

  static void axpy(GyroDistribution& y, double a, const GyroDistribution& x) {
    auto yd = y.data();
    const auto xd = x.data();
    for (std::size_t p = 0; p < yd.size(); ++p) yd[p] += a * xd[p];
  }

  void check(const GyroDistribution& f) const {
    if (f.truncation() != params_.K || !(f.grid() == *grid_)) {
      throw ShapeError("Solver: distribution does not match the solver's K / velocity grid");
    }
  }

  void velocity_half_step(GyroDistribution& f, double dt) {
    if (params_.nu == 0.0 && params_.beta == 0.0) return;
    for (std::size_t i = 0; i < f.lattice().count(); ++i) uop_.crank_nicolson(f.mode(i), 0.5 * dt);
  }

  void diffusion_half_step(GyroDistribution& f, double dt) {
    if (params_.nu == 0.0) return;
    for (std::size_t i = 0; i < f.lattice().count(); ++i) {
      const double factor = std::exp(-params_.nu * f.lattice().magnitude_squared(i) * 0.5 * dt);
      for (auto& c : f.mode(i)) c *= factor;
    }
  }

  PhysicalParams params_;
  std::shared_ptr<const VelocityGrid> grid_;
  MultiplierTable table_;
  UOperator uop_;
  TorusTransform transform_;
  std::unique_ptr<TorusTransform> quartic_;
  std::optional<SpectralField2D> frozen_;
  double courant_;
  double dt_max_;
  std::vector<double> values_, v1_, v2_, grad_;
};

/// Free-function form of the advection operator.
inline GyroDistribution advection_rhs(const GyroDistribution& f, const SpectralField2D& phi, double T = 1.0) {
  PhysicalParams p;
  p.K = f.truncation();
  p.N_u = f.nu();
  p.u_max = f.grid().u_max();
  p.T = T;
  Solver solver(p, phi);
  return solver.advection_rhs(f, phi);
}

struct RunOptions {
  double t_end = 5.0;
  double record_interval = 0.5;
  double mass_tol = 1e-10;  // relative, per step
  double monitor_slack = 1e-6;
  bool monitors = true;
};

enum class RunStatus { completed, monitor_failure, blow_up };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::monitor_failure: return "monitor_failure";
    case RunStatus::blow_up: return "blow_up";
  }
  return "?";
}

struct RunResult {
  SolverState state;
  std::vector<DiagnosticsRecord> records;
  MonitorReport monitors;
  RunStatus status = RunStatus::completed;
  double mass_drift = 0.0;  // max |M(t) - M(0)| / |M(0)| over records
  std::string message;
  std::optional<SolverState> last_valid;
};

/// Integrates to t_end, recording diagnostics at t = 0, record_interval, ...,
/// t_end. Steps are shortened to land on record times exactly.
inline RunResult run(Solver& solver, SolverState initial, const RunOptions& options,
                     const std::function<void(const SolverState&, const DiagnosticsRecord&)>& on_record = {}) {
  if (!(options.t_end >= 0.0) || !std::isfinite(options.t_end)) throw ConfigError("run: t_end must be >= 0");
  if (!(options.record_interval > 0.0)) throw ConfigError("run: record_interval must be > 0");
  RunResult result{std::move(initial), {}, {}, RunStatus::completed, 0.0, {}, std::nullopt};
  SolverState& state = result.state;
  const double t0 = state.time;
  auto emit = [&]() {
    result.records.push_back(solver.record(state));
    if (on_record) on_record(state, result.records.back());
  };
  emit();
  const double m0 = result.records.front().mass;
  long record_index = 1;
  const double t_final = t0 + options.t_end;
  const double time_eps = 1e-12 * std::max(1.0, std::abs(t_final));
  while (state.time < t_final - time_eps) {
    const double next_record = std::min(t_final, t0 + record_index * options.record_interval);
    const double dt = std::min(solver.cfl_dt(state), next_record - state.time);
    SolverState backup = state;
    solver.advance(state, dt);
    if (!state.f.all_finite()) {
      result.status = RunStatus::blow_up;
      result.message = "non-finite values at t = " + std::to_string(state.time) + " after step " +
                       std::to_string(state.step_count);
      result.last_valid = std::move(backup);
      state = *result.last_valid;
      break;
    }
    if (std::abs(state.time - next_record) <= time_eps) {
      state.time = next_record;
      emit();
      ++record_index;
      const DiagnosticsRecord& r = result.records.back();
      if (m0 != 0.0) result.mass_drift = std::max(result.mass_drift, std::abs(r.mass - m0) / std::abs(m0));
      if (options.monitors) {
        const double allowed = options.mass_tol * static_cast<double>(std::max<long>(1, state.step_count));
        if (result.mass_drift > allowed) {
          result.status = RunStatus::monitor_failure;
          result.message = "mass drift " + std::to_string(result.mass_drift) + " exceeds " + std::to_string(allowed);
          break;
        }
        const MonitorReport partial = check_apriori(result.records, solver.params().nu, solver.params().beta,
                                                    options.monitor_slack);
        if (!partial.pass) {
          result.status = RunStatus::monitor_failure;
          for (auto q : kInequalities) {
            if (partial.worst(q) < -options.monitor_slack) {
              result.message += std::string(result.message.empty() ? "" : "; ") + to_string(q) +
                                " bound violated, margin " + std::to_string(partial.worst(q));
            }
          }
          result.message += " at t = " + std::to_string(state.time);
          break;
        }
      }
    }
  }
  result.monitors = check_apriori(result.records, solver.params().nu, solver.params().beta, options.monitor_slack);
  return result;
}

}  // namespace gyrofp
