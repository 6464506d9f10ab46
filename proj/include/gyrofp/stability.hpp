#pragma once
// Two-trajectory stability experiment: s(t) = ||f1(t) - f2(t)||_{2,m} for
// initial data f_i and f_i + delta ||f_i||_{2,m} p / ||p||_{2,m}.

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "gyrofp/initial.hpp"
#include "gyrofp/norms.hpp"
#include "gyrofp/solver.hpp"

namespace gyrofp {

struct StabilityConfig {
  PhysicalParams params;
  RunOptions options;
  double courant = 0.4;
  double dt_max = 0.05;
  std::vector<double> deltas{1e-2, 1e-3, 1e-4};
  unsigned long long seed = 1;
  double linear_slack = 2.0;  // allowed factor on s1 / s2 against delta1 / delta2
};

struct StabilityTrace {
  double delta = 0.0;
  std::vector<double> t;
  std::vector<double> s;
  double max_s = 0.0;
  RunStatus status = RunStatus::completed;
};

struct StabilityReport {
  std::vector<StabilityTrace> traces;
  bool twin_identical = false;    // delta = 0 runs agree bit for bit
  double twin_max = 0.0;          // max_t s(t) for the twin pair
  bool monotone = true;           // max s strictly decreasing along the delta list
  bool near_linear = true;        // early-time s scales with delta for the two smallest deltas
  double linear_ratio = 0.0;      // (s_a / s_b) / (delta_a / delta_b) at the first record after t = 0
  bool runs_completed = true;
  std::string message;

  bool pass() const { return twin_identical && monotone && near_linear && runs_completed; }
};

namespace detail {

inline double difference_norm_2m(const GyroDistribution& a, const GyroDistribution& b) {
  GyroDistribution d = a;
  d -= b;
  return weighted_l2_norm(d, WeightKind::m_weight);
}

}  // namespace detail

/// `initial` must already be mass-normalized; the perturbation has zero x-mean
/// so both trajectories carry the same mass.
inline StabilityReport stability_experiment(const StabilityConfig& cfg, const SolverState& initial) {
  StabilityReport report;
  RunOptions options = cfg.options;

  std::vector<GyroDistribution> base;
  std::vector<double> times;
  auto make_solver = [&]() { return Solver(cfg.params, std::nullopt, cfg.courant, cfg.dt_max); };
  {
    Solver solver = make_solver();
    const RunResult r = run(solver, initial, options, [&](const SolverState& s, const DiagnosticsRecord&) {
      base.push_back(s.f);
      times.push_back(s.time);
    });
    if (r.status != RunStatus::completed) {
      report.runs_completed = false;
      report.message = std::string("base run: ") + to_string(r.status) + " " + r.message;
    }
  }

  {
    Solver solver = make_solver();
    std::size_t n = 0;
    bool identical = true;
    double worst = 0.0;
    run(solver, initial, options, [&](const SolverState& s, const DiagnosticsRecord&) {
      if (n < base.size()) {
        const auto a = base[n].data();
        const auto b = s.f.data();
        identical = identical && a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size_bytes()) == 0;
        worst = std::max(worst, detail::difference_norm_2m(base[n], s.f));
      } else {
        identical = false;
      }
      ++n;
    });
    report.twin_identical = identical && n == base.size();
    report.twin_max = worst;
  }

  const GyroDistribution direction = random_perturbation(initial.f, 1.0, cfg.seed);
  const double scale = weighted_l2_norm(initial.f, WeightKind::m_weight) / weighted_l2_norm(direction, WeightKind::m_weight);
  for (double delta : cfg.deltas) {
    StabilityTrace trace;
    trace.delta = delta;
    SolverState perturbed = initial;
    GyroDistribution p = direction;
    p *= delta * scale;
    perturbed.f += p;
    Solver solver = make_solver();
    std::size_t n = 0;
    const RunResult r = run(solver, perturbed, options, [&](const SolverState& s, const DiagnosticsRecord&) {
      if (n < base.size()) {
        trace.t.push_back(s.time);
        trace.s.push_back(detail::difference_norm_2m(base[n], s.f));
      }
      ++n;
    });
    trace.status = r.status;
    if (r.status != RunStatus::completed) {
      report.runs_completed = false;
      report.message += "delta = " + std::to_string(delta) + ": " + to_string(r.status) + " " + r.message + "; ";
    }
    for (double v : trace.s) trace.max_s = std::max(trace.max_s, v);
    report.traces.push_back(std::move(trace));
  }

  for (std::size_t i = 1; i < report.traces.size(); ++i) {
    if (!(report.traces[i].max_s < report.traces[i - 1].max_s)) report.monotone = false;
  }
  if (report.traces.size() >= 2) {
    const auto& a = report.traces[report.traces.size() - 2];
    const auto& b = report.traces.back();
    if (a.s.size() >= 2 && b.s.size() >= 2 && b.s[1] > 0.0) {
      report.linear_ratio = (a.s[1] / b.s[1]) / (a.delta / b.delta);
      report.near_linear = report.linear_ratio <= cfg.linear_slack && report.linear_ratio >= 1.0 / cfg.linear_slack;
    } else {
      report.near_linear = false;
    }
  }
  if (!report.monotone) report.message += "max s(t) is not monotone in delta; ";
  if (!report.near_linear) report.message += "early-time s(t) does not scale linearly with delta; ";
  if (!report.twin_identical) report.message += "twin runs differ; ";
  return report;
}

}  // namespace gyrofp
