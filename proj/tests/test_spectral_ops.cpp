#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "catch_amalgamated.hpp"
#include "gyrofp/initial.hpp"
#include "gyrofp/norms.hpp"
#include "gyrofp/spectral_ops.hpp"
#include "oracles.hpp"

using namespace gyrofp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SpectralField2D random_field(int K, std::mt19937_64& rng, bool zero_mean) {
  SpectralField2D f(K, zero_mean);
  const auto c = oracle::random_hermitian(K, rng, zero_mean, 0.5);
  for (std::size_t i = 0; i < c.size(); ++i) f[i] = c[i];
  return f;
}

}  // namespace

TEST_CASE("gyroaverage identities") {
  std::mt19937_64 rng(1);
  const SpectralField2D f = random_field(5, rng, false);
  const SpectralField2D same = gyroaverage(f, 0.0);
  for (std::size_t i = 0; i < f.lattice().count(); ++i) CHECK(same[i] == f[i]);

  SpectralField2D c(5);
  c(0, 0) = 2.5;
  CHECK(gyroaverage(c, 3.3)(0, 0) == 2.5);

  SpectralField2D one(2);
  one.set_mode(1, 0, 1.0);
  CHECK_THAT(std::abs(gyroaverage(one, 2.404825557695773)(1, 0)), WithinAbs(0.0, 1e-10));

  const SpectralField2D g = gyroaverage(f, 1.3);
  CHECK(g.hermitian_defect() <= 1e-15);
  CHECK(g(0, 0) == f(0, 0));
  CHECK_THROWS_AS(gyroaverage(f, -0.1), DomainError);
}

TEST_CASE("ht_hat reference values") {
  for (double T : {0.1, 1.0, 10.0}) CHECK_THAT(ht_hat(0.0, T), WithinAbs(1.0, 1e-10));
  CHECK(1.0 - ht_hat(1.0, 1.0) >= 0.25 * (1.0 - std::exp(-1.0)));
  const double v20 = ht_hat(20.0, 1.0);
  CHECK(v20 <= 0.07);
  CHECK_THAT(v20, WithinAbs(oracle::ht_closed_form(20.0, 1.0), 1e-10));
  CHECK_THROWS_AS(ht_hat(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(ht_hat(1.0, -1.0), DomainError);
}

TEST_CASE("ht_hat matches the closed form and an adaptive quadrature") {
  for (double T : {0.1, 1.0, 10.0}) {
    for (double k : {0.5, 1.0, std::sqrt(2.0), 3.0, 7.0, 15.0}) {
      INFO("T = " << T << ", k = " << k);
      const double v = ht_hat(k, T);
      CHECK_THAT(v, WithinAbs(oracle::ht_closed_form(k, T), 1e-10));
      CHECK_THAT(v, WithinAbs(oracle::ht_quadrature(k, T), 1e-10));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("multiplier table invariants") {
  for (double T : {0.1, 1.0, 10.0}) {
    auto grid = std::make_shared<const VelocityGrid>(16, 6.0);
    const MultiplierTable table(12, T, grid);
    const auto& lat = table.lattice();
    CHECK(table.ht(lat.zero()) == 1.0);
    for (std::size_t i = 0; i < lat.count(); ++i) {
      if (i == lat.zero()) continue;
      const double k = std::sqrt(lat.magnitude_squared(i));
      CHECK(table.ht(i) >= 0.0);
      CHECK(table.ht(i) <= 1.0);
      CHECK(1.0 - table.ht(i) >= multiplier_gap_bound(k, T) - 1e-10);
      CHECK(table.lt_inv(i) <= inversion_bound(T) + 1e-8);
    }
  }
}

TEST_CASE("density of x-independent data is constant") {
  auto grid = std::make_shared<const VelocityGrid>(32, 6.0);
  GyroDistribution f(3, grid);
  fill_perturbed_maxwellian(f, 1.0, {});
  const SpectralField2D rho = compute_density(f);
  for (std::size_t i = 0; i < rho.lattice().count(); ++i) {
    if (i != rho.lattice().zero()) CHECK(rho[i] == Complex{});
  }
  CHECK_THAT(rho.mean() * kTorusArea, WithinRel(f.mass(), 1e-14));
}

TEST_CASE("normalized Maxwellian has unit total density") {
  const double T = 1.0;
  for (auto [n, tol] : {std::pair<std::size_t, double>{128, 1e-8}, {256, 1e-10}}) {
    auto grid = std::make_shared<const VelocityGrid>(n, 6.0 * std::sqrt(T));
    GyroDistribution f(2, grid);
    for (std::size_t j = 0; j < grid->size(); ++j) {
      f(0, 0, j) = std::exp(-grid->node(j) * grid->node(j) / T) / (kTorusArea * std::numbers::pi * T);
    }
    const MultiplierTable table(2, T, grid);
    CHECK_THAT(compute_density(f, table).mean() * kTorusArea, WithinAbs(1.0, tol));
  }
}

TEST_CASE("density from a single velocity node") {
  auto grid = std::make_shared<const VelocityGrid>(12, 3.0);
  GyroDistribution f(2, grid);
  const std::size_t star = 5;
  const double g = 0.8;
  f(1, 0, star) = 0.5 * g;
  f(-1, 0, star) = 0.5 * g;
  const MultiplierTable table(2, 1.0, grid);
  const SpectralField2D rho = compute_density(f, table);
  const double expected = grid->weights(WeightKind::u_weight)[star] * oracle::j0_special(grid->node(star)) * 0.5 * g;
  CHECK_THAT(rho(1, 0).real(), WithinAbs(expected, 1e-15));
  CHECK_THAT(rho(-1, 0).real(), WithinAbs(expected, 1e-15));
  CHECK(rho.hermitian_defect() <= 1e-16);
  const SpectralField2D direct = compute_density(f);
  CHECK_THAT(direct(1, 0).real(), WithinAbs(expected, 1e-15));
}

TEST_CASE("solve_potential reference cases") {
  auto grid = std::make_shared<const VelocityGrid>(16, 6.0);
  const MultiplierTable table(4, 1.0, grid);
  SpectralField2D rho(4);
  rho(0, 0) = 1.0 / kTorusArea;
  const SpectralField2D zero = solve_potential(rho, table);
  for (std::size_t i = 0; i < zero.lattice().count(); ++i) CHECK(zero[i] == Complex{});

  rho.set_mode(1, 0, 0.5);  // rho - mean = cos(x1)
  const SpectralField2D phi = solve_potential(rho, table);
  const double amplitude = 2.0 * phi(1, 0).real();
  CHECK_THAT(amplitude, WithinRel(1.0 / (1.0 - oracle::ht_closed_form(1.0, 1.0)), 1e-10));
  CHECK(amplitude <= inversion_bound(1.0));
  CHECK_THAT(inversion_bound(1.0), WithinAbs(6.3279, 1e-4));
  CHECK(phi.zero_mean());
  CHECK(phi(0, 0) == Complex{});
}

TEST_CASE("solve_potential obeys the inversion operator bound") {
  std::mt19937_64 rng(42);
  for (double T : {0.1, 1.0, 10.0}) {
    auto grid = std::make_shared<const VelocityGrid>(16, 6.0);
    const MultiplierTable table(8, T, grid);
    for (int trial = 0; trial < 10; ++trial) {
      SpectralField2D rho = random_field(8, rng, false);
      const SpectralField2D phi = solve_potential(rho, table);
      SpectralField2D fluct = rho;
      fluct.set_zero_mean(true);
      for (double s : {0.0, 0.5, 1.0}) {
        CHECK(sobolev_norm(phi, s) <= inversion_bound(T) * sobolev_norm(fluct, s) * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("drift velocity") {
  SpectralField2D zero(3, true);
  auto [a, b] = drift_velocity(zero, 1.0);
  CHECK(sobolev_norm(a, 0.0) == 0.0);
  CHECK(sobolev_norm(b, 0.0) == 0.0);

  SpectralField2D phi(3, true);
  phi.set_mode(1, 0, 0.5);  // cos(x1)
  auto [v1, v2] = drift_velocity(phi, 0.0);
  for (double x : {0.0, 0.7, 2.0}) {
    CHECK_THAT(v1.evaluate(x, 0.3), WithinAbs(0.0, 1e-15));
    CHECK_THAT(v2.evaluate(x, 0.3), WithinAbs(-std::sin(x), 1e-15));
  }

  std::mt19937_64 rng(8);
  const SpectralField2D r = random_field(6, rng, true);
  auto [w1, w2] = drift_velocity(r, 0.8);
  const auto& lat = r.lattice();
  double div = 0.0;
  for (std::size_t i = 0; i < lat.count(); ++i) div = std::max(div, std::abs(static_cast<double>(lat.k1(i)) * w1[i] + static_cast<double>(lat.k2(i)) * w2[i]));
  CHECK(div <= 1e-14);
}

TEST_CASE("gyroaverage smoothing inequalities") {
  std::mt19937_64 rng(17);
  const double c = std::pow(2.0, 0.25);
  for (int trial = 0; trial < 10; ++trial) {
    const SpectralField2D phi = random_field(16, rng, true);
    for (double u : {0.1, 1.0, 5.0}) {
      const SpectralField2D g = gyroaverage(phi, u);
      SpectralField2D dg(16, true);
      const auto& lat = phi.lattice();
      for (std::size_t i = 0; i < lat.count(); ++i) {
        const double k = std::sqrt(lat.magnitude_squared(i));
        dg[i] = k * bessel::j0_prime(k * u) * phi[i];
      }
      for (double s : {0.0, 0.5, 1.0}) {
        CHECK(sobolev_norm(g, s) <= sobolev_norm(phi, s) * (1.0 + 1e-12));
        CHECK(sobolev_norm(g, s + 0.5) <= c / std::sqrt(u) * sobolev_norm(phi, s) * (1.0 + 1e-12));
        CHECK(sobolev_norm(dg, s) <= sobolev_norm(phi, s + 0.5) / std::sqrt(u) * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("density regularity for mass-normalized distributions") {
  auto grid = std::make_shared<const VelocityGrid>(32, 6.0);
  std::mt19937_64 rng(23);
  const int K = 8;
  const double bound = std::pow(2.0, 0.25) * std::numbers::pi;
  for (int trial = 0; trial < 10; ++trial) {
    GyroDistribution f(K, grid);
    fill_perturbed_maxwellian(f, 1.0, {});
    GyroDistribution p = random_perturbation(f, 1.0, 100 + trial);
    p *= 0.01;
    f += p;
    normalize_mass(f);
    SpectralField2D rho = compute_density(f);
    rho.set_zero_mean(true);
    for (double s : {0.0, 0.5, 1.0}) {
      double sum = 0.0;
      const auto w = grid->weights(WeightKind::m_weight);
      for (std::size_t i = 0; i < f.lattice().count(); ++i) {
        const double factor = std::pow(1.0 + f.lattice().magnitude_squared(i), s);
        for (std::size_t j = 0; j < grid->size(); ++j) sum += w[j] * factor * std::norm(f.mode(i)[j]);
      }
      CHECK(sobolev_norm(rho, s + 0.5) <= bound * std::sqrt(sum) * (1.0 + 1e-8));
    }
  }
}
