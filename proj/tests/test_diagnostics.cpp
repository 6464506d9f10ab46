#include <cmath>
#include <memory>
#include <numbers>

#include "catch_amalgamated.hpp"
#include "gyrofp/diagnostics.hpp"
#include "gyrofp/initial.hpp"
#include "gyrofp/solver.hpp"

using namespace gyrofp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<DiagnosticsRecord> exponential_series(double nu, double beta, double factor) {
  std::vector<DiagnosticsRecord> s;
  for (int n = 0; n <= 4; ++n) {
    DiagnosticsRecord r;
    r.t = 0.5 * n;
    r.mass = 1.0;
    r.norm_2u = factor * std::exp(beta * r.t);
    r.norm_2m = 2.0;
    r.norm_l2m_l4 = 1.0 * std::exp((beta + 2.0 * nu) * r.t);
    r.rho_h_half = 0.1;
    s.push_back(r);
  }
  s.front().norm_2u = 1.0;
  return s;
}

}  // namespace

TEST_CASE("zero solution passes every bound") {
  std::vector<DiagnosticsRecord> s(3);
  s[1].t = 1.0;
  s[2].t = 2.0;
  const MonitorReport r = check_apriori(s, 0.01, 0.1);
  CHECK(r.pass);
  CHECK(r.results.size() == 12);
  for (const auto& m : r.results) CHECK(m.pass);
}

TEST_CASE("a 1% u-norm violation is flagged with margin -0.01") {
  const double beta = 0.1;
  const auto s = exponential_series(0.01, beta, 1.0 / 0.99);
  const MonitorReport r = check_apriori(s, 0.01, beta);
  CHECK_FALSE(r.pass);
  CHECK_THAT(r.worst(Inequality::u_norm), WithinAbs(1.0 - 1.0 / 0.99, 1e-12));
  CHECK_THAT(r.worst(Inequality::u_norm), WithinAbs(-0.0101, 1e-4));
  CHECK(r.worst(Inequality::l2m_l4) >= -1e-12);
}

TEST_CASE("series exactly on the bound passes within slack") {
  const auto s = exponential_series(0.01, 0.1, 1.0);
  CHECK(check_apriori(s, 0.01, 0.1).pass);
}

TEST_CASE("growth integral and its beta = 0 convention") {
  CHECK(growth_integral(0.0, 1.5) == 3.0);
  CHECK_THAT(growth_integral(0.1, 2.0), WithinRel((std::exp(0.4) - 1.0) / 0.1, 1e-14));
  CHECK_THAT(growth_integral(1e-12, 2.0), WithinRel(4.0, 1e-9));
}

TEST_CASE("m-norm bound formula") {
  DiagnosticsRecord r0;
  r0.norm_2u = 2.0;
  r0.norm_2m = 3.0;
  r0.norm_l2m_l4 = 1.0;
  const auto b = apriori_bounds(r0, 1.0, 0.05, 0.2);
  CHECK_THAT(b[0], WithinRel(2.0 * std::exp(0.2), 1e-14));
  CHECK_THAT(b[1], WithinRel(std::sqrt(9.0 + 0.3 * std::expm1(0.4) / 0.2 * 4.0), 1e-14));
  CHECK_THAT(b[2], WithinRel(std::exp(0.3), 1e-14));
  CHECK_THAT(rho_regularity_bound(1.0), WithinRel(std::pow(2.0, 0.25) * std::numbers::pi / (2.0 * std::numbers::pi), 1e-14));
}

TEST_CASE("pure x-diffusion run passes the monitors") {
  PhysicalParams p;
  p.K = 6;
  p.N_u = 16;
  p.beta = 0.0;
  p.nu = 0.05;
  Solver solver(p, SpectralField2D(p.K, true));
  SolverState s = make_state(p);
  fill_perturbed_maxwellian(s.f, 1.0, {{1, 0, 0.3, 0.0}, {2, 1, 0.2, 0.4}});
  normalize_mass(s.f);
  RunOptions o;
  o.t_end = 1.0;
  o.record_interval = 0.25;
  const RunResult r = run(solver, s, o);
  CHECK(r.monitors.pass);
  CHECK(r.monitors.worst(Inequality::u_norm) >= 0.0);
}

TEST_CASE("compute_record fields") {
  PhysicalParams p;
  p.K = 4;
  p.N_u = 16;
  Solver solver(p);
  SolverState s = make_state(p);
  fill_perturbed_maxwellian(s.f, 1.0, {{1, 0, 0.3, 0.0}});
  normalize_mass(s.f);
  const DiagnosticsRecord r = solver.record(s);
  CHECK_THAT(r.mass, WithinAbs(1.0, 1e-14));
  CHECK(r.all_finite());
  CHECK(r.norm_2m >= r.norm_2u);
  CHECK(r.min_f > 0.0);
  CHECK(r.boundary_mass_fraction < 1e-10);
  CHECK(r.phi_h1 > 0.0);
  CHECK(r.rho_h_half <= rho_regularity_bound(r.norm_2m));
  CHECK(DiagnosticsRecord::from_values(r.values()) == r);

  TorusTransform coarse(p.K);
  CHECK_THROWS_AS(compute_record(0.0, s.f, solver.density(s.f), solver.potential(s.f), coarse), ShapeError);
}

TEST_CASE("inequality names") {
  CHECK(std::string(to_string(Inequality::u_norm)) == "u_norm");
  CHECK(std::string(to_string(Inequality::rho_regularity)) == "rho_regularity");
}
