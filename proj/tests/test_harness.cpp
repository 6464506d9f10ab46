#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "catch_amalgamated.hpp"
#include "gyrofp/harness4d.hpp"

using namespace gyrofp;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double pi = std::numbers::pi;

double max_difference(const Gyro4DState& a, const Gyro4DState& b) {
  double worst = 0.0;
  for (std::size_t n = 0; n < a.data.size(); ++n) worst = std::max(worst, std::abs(a.data[n] - b.data[n]));
  return worst;
}

HarnessParams field_free(double nu, double beta, int M = 32) {
  HarnessParams p;
  p.model = HarnessModel::gyro;
  p.nu = nu;
  p.beta = beta;
  p.epsilon = 0.1;
  p.K = 1;
  p.M = M;
  p.U = 6.0;
  return p;
}

}  // namespace

TEST_CASE("velocity box geometry") {
  VelocityBox box(8, 2.0);
  CHECK(box.spacing() == 0.5);
  CHECK(box.node(0) == -2.0);
  CHECK(box.signed_index(5) == -3);
  CHECK(box.nyquist(4));
  CHECK_THROWS_AS(VelocityBox(7, 1.0), ConfigError);
  CHECK_THROWS_AS(VelocityBox(8, 0.0), ConfigError);
}

TEST_CASE("pure rotation returns after one gyro period") {
  const HarnessParams p = field_free(0.0, 0.0, 64);
  Harness4D h(p);
  Gyro4DState s = h.make_state();
  fill_separable(s, [](double a, double b) { return std::exp(-((a - 1.0) * (a - 1.0) + 2.0 * (b + 0.5) * (b + 0.5))); },
                 {{1, 0, 0.4, 0.3}});
  const Gyro4DState s0 = s;
  const int n = 100;
  const double dt = 2.0 * pi * p.epsilon / n;
  for (int k = 0; k < n; ++k) h.step(s, dt);
  CHECK(max_difference(s, s0) <= 1e-9);
}

TEST_CASE("quarter turn matches the rotated function") {
  const HarnessParams p = field_free(0.0, 0.0, 64);
  Harness4D h(p);
  Gyro4DState s = h.make_state();
  auto f = [](double a, double b) { return std::exp(-((a - 1.0) * (a - 1.0) + 2.0 * b * b)); };
  fill_separable(s, f, {});
  h.rotate(s, 0.5 * pi);
  Gyro4DState expected = h.make_state();
  // g o R(-pi/2): (a, b) -> (b, -a)
  fill_separable(expected, [&](double a, double b) { return f(b, -a); }, {});
  CHECK(max_difference(s, expected) <= 1e-10);
}

TEST_CASE("radial data is invariant under rotation") {
  const HarnessParams p = field_free(0.0, 0.0, 64);
  Harness4D h(p);
  Gyro4DState s = h.make_state();
  fill_separable(s, [](double a, double b) { return std::exp(-(a * a + b * b)); }, {{1, 1, 0.2, 0.0}});
  const Gyro4DState s0 = s;
  for (double theta : {0.1, 1.0, 2.5, -2.0}) {
    Gyro4DState r = s0;
    h.rotate(r, theta);
    CHECK(max_difference(r, s0) <= 1e-10);
  }
}

TEST_CASE("mass is conserved over a thousand steps") {
  for (auto model : {HarnessModel::gyro, HarnessModel::vfp4d}) {
    HarnessParams p = field_free(0.05, 0.1, 24);
    p.model = model;
    Harness4D h(p);
    Gyro4DState s = h.make_state();
    fill_separable(s, [](double a, double b) { return std::exp(-((a - 0.5) * (a - 0.5) + b * b)); },
                   {{1, 0, 0.5, 0.0}});
    const double m0 = s.mass();
    for (int k = 0; k < 1000; ++k) h.step(s, 0.002);
    CHECK(std::abs(s.mass() - m0) <= 1e-8 * m0);
    CHECK(s.all_finite());
  }
}

TEST_CASE("angular average of radial data is the radial profile") {
  HarnessParams p = field_free(0.0, 0.0, 48);
  Gyro4DState s(p);
  fill_separable(s, [](double a, double b) { return std::exp(-(a * a + b * b)); }, {});
  auto grid = std::make_shared<const VelocityGrid>(24, 4.0);
  const GyroDistribution avg = angular_average(s, grid);
  for (std::size_t j = 0; j < grid->size(); ++j) {
    const double u = grid->node(j);
    CHECK_THAT(avg(0, 0, j).real(), WithinAbs(std::exp(-u * u), 1e-10));
    CHECK_THAT(avg(0, 0, j).imag(), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("odd angular harmonic averages to zero and projects onto l = 1") {
  HarnessParams p = field_free(0.0, 0.0, 48);
  Gyro4DState s(p);
  // cos(phi) u e^{-u^2}
  fill_separable(s, [](double a, double b) { return a * std::exp(-(a * a + b * b)); }, {});
  auto grid = std::make_shared<const VelocityGrid>(24, 4.0);
  AngularProjector proj(s.box, grid);
  const GyroDistribution avg = proj.average(s);
  const GyroDistribution first = proj.first_harmonic(s);
  for (std::size_t j = 0; j < grid->size(); ++j) {
    const double u = grid->node(j);
    CHECK(std::abs(avg(0, 0, j)) <= 1e-10);
    CHECK(std::abs(first(0, 0, j) - 0.5 * u * std::exp(-u * u)) <= 1e-10);
  }
}

TEST_CASE("angular average matches a dense angle quadrature") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> centre(-1.0, 1.0);
  std::uniform_real_distribution<double> width(0.8, 1.5);
  struct Bump {
    double c1, c2, w, a;
  };
  std::vector<Bump> bumps;
  for (int i = 0; i < 3; ++i) bumps.push_back({centre(rng), centre(rng), width(rng), 0.5 + 0.5 * i});
  auto f = [&](double a, double b) {
    double v = 0.0;
    for (const auto& k : bumps) v += k.a * std::exp(-((a - k.c1) * (a - k.c1) + (b - k.c2) * (b - k.c2)) / k.w);
    return v;
  };
  HarnessParams p = field_free(0.0, 0.0, 48);
  Gyro4DState s(p);
  fill_separable(s, f, {});
  auto grid = std::make_shared<const VelocityGrid>(20, 4.0);
  const GyroDistribution avg = angular_average(s, grid);
  for (std::size_t j = 0; j < grid->size(); ++j) {
    const double u = grid->node(j);
    double sum = 0.0;
    const int n = 4096;
    for (int m = 0; m < n; ++m) {
      const double phi = 2.0 * pi * m / n;
      sum += f(u * std::cos(phi), u * std::sin(phi));
    }
    CHECK_THAT(avg(0, 0, j).real(), WithinAbs(sum / n, 1e-8));
  }
}

TEST_CASE("vfp4d lift of radial data tracks the 1D solver") {
  RadialConfig cfg;
  cfg.K = 1;
  cfg.t_end = 0.2;
  cfg.levels = 1;
  cfg.phi_modes = {{1, 0, 0.5, 0.0}};
  cfg.f_modes = {{1, 0, 0.3, 0.0}};
  const RadialReport r = radial_equivalence(cfg);
  REQUIRE(r.levels.size() == 1);
  CHECK(r.levels[0].error < 0.02 * r.levels[0].reference);
}

TEST_CASE("harness parameter validation") {
  HarnessParams p = field_free(0.0, 0.0);
  p.epsilon = 0.0;
  CHECK_THROWS_AS(Harness4D(p), ConfigError);
  p = field_free(-1.0, 0.0);
  CHECK_THROWS_AS(Harness4D(p), ConfigError);
  p = field_free(0.0, 0.0);
  CHECK_THROWS_AS(Harness4D(p, SpectralField2D(1, true)), ConfigError);
  Harness4D h(field_free(0.0, 0.0));
  Gyro4DState s = h.make_state();
  CHECK_THROWS_AS(h.step(s, 0.0), ConfigError);
}
