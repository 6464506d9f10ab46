#pragma once
// Cell-centered discretization of the Larmor-radius axis u in (0, u_max].
//
// Nodes sit at u_j = (j - 1/2) du, so no node touches the coordinate
// singularity at u = 0. Quadrature is the composite midpoint rule with
// Gregory-type end corrections on the first and last six nodes; the
// corrections cancel the Euler-Maclaurin end terms, giving a rule that is exact
// for polynomial integrands F(u) of degree <= 5 and converges at eighth order
// for smooth F. Every weighted integral int g(u) k(u) du is this rule applied
// to F = g k.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "gyrofp/errors.hpp"

namespace gyrofp {

enum class WeightKind {
  u_weight,   // 2 pi u
  m_weight,   // 2 pi u (1 + u^2)
  m_tilde,    // 1 + u^2
  inverse_u,  // 2 pi u (1 + u^2) / u
};

inline double weight_function(WeightKind kind, double u) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (kind) {
    case WeightKind::u_weight: return two_pi * u;
    case WeightKind::m_weight: return two_pi * u * (1.0 + u * u);
    case WeightKind::m_tilde: return 1.0 + u * u;
    case WeightKind::inverse_u: return two_pi * (1.0 + u * u);
  }
  return 0.0;
}

inline const char* to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::u_weight: return "u";
    case WeightKind::m_weight: return "m";
    case WeightKind::m_tilde: return "m_tilde";
    case WeightKind::inverse_u: return "inverse_u";
  }
  return "?";
}

class VelocityGrid {
 public:
  /// Polynomial degree (in F) integrated exactly once the grid has >= 12 nodes.
  static constexpr int kExactDegree = 5;

  VelocityGrid(std::size_t count, double u_max) : u_max_(u_max) {
    if (count == 0) throw ConfigError("VelocityGrid: need at least one node");
    if (!std::isfinite(u_max) || u_max <= 0.0) {
      throw ConfigError("VelocityGrid: u_max must be positive and finite, got " +
                        std::to_string(u_max));
    }
    du_ = u_max / static_cast<double>(count);
    nodes_.resize(count);
    for (std::size_t j = 0; j < count; ++j) nodes_[j] = (static_cast<double>(j) + 0.5) * du_;

    const std::vector<double> gamma = end_corrections(count);
    base_.assign(count, du_);
    for (std::size_t i = 0; i < gamma.size(); ++i) {
      base_[i] += du_ * gamma[i];
      base_[count - 1 - i] += du_ * gamma[i];
    }
    for (auto kind : {WeightKind::u_weight, WeightKind::m_weight, WeightKind::m_tilde,
                      WeightKind::inverse_u}) {
      auto& w = weights_[static_cast<std::size_t>(kind)];
      w.resize(count);
      for (std::size_t j = 0; j < count; ++j) w[j] = base_[j] * weight_function(kind, nodes_[j]);
    }
  }

  std::size_t size() const { return nodes_.size(); }
  double u_max() const { return u_max_; }
  double spacing() const { return du_; }
  std::span<const double> nodes() const { return nodes_; }
  double node(std::size_t j) const { return nodes_[j]; }

  /// Weights of the plain rule: sum_j base[j] F(u_j) ~ int_0^{u_max} F(u) du.
  std::span<const double> base_weights() const { return base_; }

  /// Weights for int g(u) k(u) du with k the requested weight function.
  std::span<const double> weights(WeightKind kind = WeightKind::u_weight) const {
    return weights_[static_cast<std::size_t>(kind)];
  }

  /// Cell interface radius u_{j+1/2} = (j + 1) du, j = 0 .. size()-1.
  double interface(std::size_t j) const { return static_cast<double>(j + 1) * du_; }

  bool operator==(const VelocityGrid& other) const {
    return nodes_.size() == other.nodes_.size() && u_max_ == other.u_max_;
  }

 private:
  // Corrections gamma_i (i = 0 .. q-1) added to the midpoint weight at each end,
  // solving sum_i gamma_i (i + 1/2)^n = n! B_{n+1}(1/2) / (n+1)! for odd n and 0
  // for even n, n < q.
  static std::vector<double> end_corrections(std::size_t count) {
    static constexpr std::array<double, 2> q2{1.0 / 24.0, -1.0 / 24.0};
    static constexpr std::array<double, 4> q4{703.0 / 5760.0, -463.0 / 1920.0, 101.0 / 640.0,
                                              -223.0 / 5760.0};
    static constexpr std::array<double, 6> q6{184831.0 / 967680.0, -532379.0 / 967680.0,
                                              68155.0 / 96768.0,   -248543.0 / 483840.0,
                                              195203.0 / 967680.0, -32119.0 / 967680.0};
    if (count >= 12) return {q6.begin(), q6.end()};
    if (count >= 8) return {q4.begin(), q4.end()};
    if (count >= 4) return {q2.begin(), q2.end()};
    return {};
  }

  double u_max_;
  double du_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> base_;
  std::array<std::vector<double>, 4> weights_;
};

/// Weighted quadrature sum_j w_j(kind) g(u_j).
inline double integrate_u(const VelocityGrid& grid, std::span<const double> samples,
                          WeightKind kind = WeightKind::u_weight) {
  if (samples.size() != grid.size()) {
    throw ShapeError("integrate_u: " + std::to_string(samples.size()) + " samples for " +
                     std::to_string(grid.size()) + " nodes");
  }
  const auto w = grid.weights(kind);
  double sum = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) sum += w[j] * samples[j];
  return sum;
}

}  // namespace gyrofp
