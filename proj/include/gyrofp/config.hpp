#pragma once
// Run configuration: INI-style key = value text with sections.
//
//   [physics]    nu = 0.01, beta = 0.1, T = 1
//   [grid]       K = 32, N_u = 32, u_max = 6
//   [time]       t_end = 5, dt_max = 0.05, record_interval = 0.5, courant = 0.4
//   [initial]    type = maxwellian | perturbed_maxwellian | file
//                T0 = 1, modes = "k1 k2 amplitude phase; ...", path = <snapshot>
//   [run]        mode = nonlinear | frozen_phi | harness_4d | epsilon_sweep | stability_pair
//                seed = 1, output_dir = .
//   [monitors]   enabled = true, slack = 1e-6, mass_tol = 1e-10
//   [frozen]     source = zero | modes | snapshot, modes = ..., path = ...
//   [harness]    radial-equivalence comparison (see RadialConfig)
//   [sweep]      epsilon sweep (see SweepConfig), epsilons = "0.2, 0.1, 0.05"
//   [stability]  deltas = "1e-2, 1e-3, 1e-4", linear_slack = 2
//
// Unknown sections and keys are rejected.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gyrofp/errors.hpp"
#include "gyrofp/harness4d.hpp"
#include "gyrofp/initial.hpp"
#include "gyrofp/snapshot.hpp"
#include "gyrofp/solver.hpp"
#include "gyrofp/stability.hpp"

namespace gyrofp {

enum class RunMode { nonlinear, frozen_phi, harness_4d, epsilon_sweep, stability_pair };
enum class InitialKind { maxwellian, perturbed_maxwellian, file };
enum class FrozenSource { zero, modes, snapshot };

inline const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::nonlinear: return "nonlinear";
    case RunMode::frozen_phi: return "frozen_phi";
    case RunMode::harness_4d: return "harness_4d";
    case RunMode::epsilon_sweep: return "epsilon_sweep";
    case RunMode::stability_pair: return "stability_pair";
  }
  return "?";
}

struct InitialCondition {
  InitialKind kind = InitialKind::perturbed_maxwellian;
  double T0 = 1.0;
  std::vector<ModePerturbation> modes{{1, 0, 0.3, 0.0}, {0, 1, 0.2, 0.5}, {1, 1, 0.1, 1.0}, {2, -1, 0.1, 2.0}};
  std::string path;
};

struct FrozenPotential {
  FrozenSource source = FrozenSource::zero;
  std::vector<ModePerturbation> modes;
  std::string path;
};

struct RunConfig {
  PhysicalParams params;
  double t_end = 5.0;
  double dt_max = 0.05;
  double record_interval = 0.5;
  double courant = 0.4;
  InitialCondition initial;
  unsigned long long seed = 1;
  std::string output_dir = ".";
  bool monitors = true;
  double monitor_slack = 1e-6;
  double mass_tol = 1e-10;
  RunMode mode = RunMode::nonlinear;
  FrozenPotential frozen;
  RadialConfig harness;
  SweepConfig sweep;
  std::vector<double> deltas{1e-2, 1e-3, 1e-4};
  double linear_slack = 2.0;

  RunOptions run_options() const {
    RunOptions o;
    o.t_end = t_end;
    o.record_interval = record_interval;
    o.mass_tol = mass_tol;
    o.monitor_slack = monitor_slack;
    o.monitors = monitors;
    return o;
  }

  StabilityConfig stability() const {
    StabilityConfig s;
    s.params = params;
    s.options = run_options();
    s.courant = courant;
    s.dt_max = dt_max;
    s.deltas = deltas;
    s.seed = seed;
    s.linear_slack = linear_slack;
    return s;
  }

  void validate() const {
    params.validate();
    if (!std::isfinite(t_end) || t_end < 0.0) throw ConfigError("t_end must be finite and >= 0");
    if (!(dt_max > 0.0) || !std::isfinite(dt_max)) throw ConfigError("dt_max must be > 0");
    if (!(record_interval > 0.0) || !std::isfinite(record_interval)) throw ConfigError("record_interval must be > 0");
    if (!(courant > 0.0) || !std::isfinite(courant)) throw ConfigError("courant must be > 0");
    if (!(monitor_slack >= 0.0)) throw ConfigError("monitors.slack must be >= 0");
    if (!(mass_tol > 0.0)) throw ConfigError("monitors.mass_tol must be > 0");
    if (!(initial.T0 > 0.0) || !std::isfinite(initial.T0)) throw ConfigError("initial.T0 must be > 0");
    if (initial.kind == InitialKind::file && initial.path.empty()) throw ConfigError("initial.path is required for type = file");
    if (frozen.source == FrozenSource::snapshot && frozen.path.empty()) {
      throw ConfigError("frozen.path is required for source = snapshot");
    }
    for (double d : deltas) {
      if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("stability.deltas must be positive");
    }
    for (double e : sweep.epsilons) {
      if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("sweep.epsilons must be positive");
    }
    if (sweep.epsilons.empty()) throw ConfigError("sweep.epsilons must not be empty");
    if (harness.levels < 1 || harness.N_u < 3 || harness.M < 4 || !(harness.dt > 0.0)) {
      throw ConfigError("harness: levels >= 1, N_u >= 3, M >= 4 and dt > 0 required");
    }
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\"");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\"");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& where, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) throw ConfigError(where + ": expected a number, got '" + text + "'");
  return v;
}

inline long long parse_integer(const std::string& where, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size()) throw ConfigError(where + ": expected an integer, got '" + text + "'");
  return v;
}

inline bool parse_bool(const std::string& where, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(where + ": expected true/false, got '" + text + "'");
}

inline std::vector<double> parse_list(const std::string& where, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(trim(text));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(where, item));
  return out;
}

/// "k1 k2 amplitude phase; k1 k2 amplitude phase; ..."
inline std::vector<ModePerturbation> parse_modes(const std::string& where, const std::string& text) {
  std::vector<ModePerturbation> out;
  std::stringstream ss(trim(text));
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (trim(item).empty()) continue;
    std::istringstream fields(item);
    std::vector<std::string> parts;
    std::string p;
    while (fields >> p) parts.push_back(p);
    if (parts.size() != 4) throw ConfigError(where + ": each mode needs 'k1 k2 amplitude phase', got '" + item + "'");
    ModePerturbation m;
    m.k1 = static_cast<int>(parse_integer(where, parts[0]));
    m.k2 = static_cast<int>(parse_integer(where, parts[1]));
    m.amplitude = parse_double(where, parts[2]);
    m.phase = parse_double(where, parts[3]);
    out.push_back(m);
  }
  return out;
}

class SectionReader {
 public:
  SectionReader(const boost::property_tree::ptree& tree, std::string name) : name_(std::move(name)) {
    if (auto child = tree.get_child_optional(name_)) section_ = &*child;
  }

  std::optional<std::string> raw(const std::string& key) {
    seen_.insert(key);
    if (!section_) return std::nullopt;
    auto v = section_->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return *v;
  }

  void number(const std::string& key, double& out) {
    if (auto v = raw(key)) out = parse_double(where(key), *v);
  }
  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (auto v = raw(key)) {
      const long long x = parse_integer(where(key), *v);
      if (x < 0 && std::is_unsigned_v<Int>) throw ConfigError(where(key) + ": must be >= 0");
      out = static_cast<Int>(x);
    }
  }
  void boolean(const std::string& key, bool& out) {
    if (auto v = raw(key)) out = parse_bool(where(key), *v);
  }
  void text(const std::string& key, std::string& out) {
    if (auto v = raw(key)) out = trim(*v);
  }
  void list(const std::string& key, std::vector<double>& out) {
    if (auto v = raw(key)) out = parse_list(where(key), *v);
  }
  void modes(const std::string& key, std::vector<ModePerturbation>& out) {
    if (auto v = raw(key)) out = parse_modes(where(key), *v);
  }

  void reject_unknown() const {
    if (!section_) return;
    for (const auto& [key, value] : *section_) {
      if (!seen_.count(key)) throw ConfigError("unknown key '" + key + "' in section [" + name_ + "]");
    }
  }

  std::string where(const std::string& key) const { return name_ + "." + key; }

 private:
  std::string name_;
  const boost::property_tree::ptree* section_ = nullptr;
  std::set<std::string> seen_;
};

}  // namespace detail

inline RunConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  static const std::set<std::string> sections{"physics", "grid",   "time",    "initial",  "run",
                                              "monitors", "frozen", "harness", "sweep", "stability"};
  for (const auto& [name, child] : tree) {
    if (!sections.count(name)) {
      if (!child.data().empty()) throw ConfigError("key '" + name + "' outside any section");
      throw ConfigError("unknown section [" + name + "]");
    }
  }

  RunConfig c;
  {
    detail::SectionReader s(tree, "physics");
    s.number("nu", c.params.nu);
    s.number("beta", c.params.beta);
    s.number("T", c.params.T);
    s.reject_unknown();
  }
  {
    detail::SectionReader s(tree, "grid");
    s.integer("K", c.params.K);
    s.integer("N_u", c.params.N_u);
    s.number("u_max", c.params.u_max);
    s.reject_unknown();
  }
  {
    detail::SectionReader s(tree, "time");
    s.number("t_end", c.t_end);
    s.number("dt_max", c.dt_max);
    s.number("record_interval", c.record_interval);
    s.number("courant", c.courant);
    s.reject_unknown();
  }
  {
    detail::SectionReader s(tree, "initial");
    std::string type;
    s.text("type", type);
    if (type == "maxwellian") {
      c.initial.kind = InitialKind::maxwellian;
      c.initial.modes.clear();
    } else if (type == "perturbed_maxwellian" || type.empty()) {
      c.initial.kind = InitialKind::perturbed_maxwellian;
    } else if (type == "file") {
      c.initial.kind = InitialKind::file;
    } else {
      throw ConfigError("initial.type: unknown value '" + type + "'");
    }
    s.number("T0", c.initial.T0);
    s.modes("modes", c.initial.modes);
    s.text("path", c.initial.path);
    s.reject_unknown();
  }
  {
    detail::SectionReader s(tree, "run");
    std::string mode;
    s.text("mode", mode);
    if (mode.empty() || mode == "nonlinear") c.mode = RunMode::nonlinear;
    else if (mode == "frozen_phi") c.mode = RunMode::frozen_phi;
    else if (mode == "harness_4d") c.mode = RunMode::harness_4d;
    else if (mode == "epsilon_sweep") c.mode = RunMode::epsilon_sweep;
    else if (mode == "stability_pair") c.mode = RunMode::stability_pair;
    else throw ConfigError("run.mode: unknown value '" + mode + "'");
    s.integer("seed", c.seed);
    s.text("output_dir", c.output_dir);
    s.reject_unknown();
  }
  {
    detail::SectionReader s(tree, "monitors");
    s.boolean("enabled", c.monitors);
    s.number("slack", c.monitor_slack);
    s.number("mass_tol", c.mass_tol);
    s.reject_unknown();
  }
  {
    detail::SectionReader s(tree, "frozen");
    std::string source;
    s.text("source", source);
    if (source.empty() || source == "zero") c.frozen.source = FrozenSource::zero;
    else if (source == "modes") c.frozen.source = FrozenSource::modes;
    else if (source == "snapshot") c.frozen.source = FrozenSource::snapshot;
    else throw ConfigError("frozen.source: unknown value '" + source + "'");
    s.modes("modes", c.frozen.modes);
    s.text("path", c.frozen.path);
    s.reject_unknown();
  }
  {
    detail::SectionReader s(tree, "harness");
    s.number("nu", c.harness.nu);
    s.number("beta", c.harness.beta);
    s.integer("K", c.harness.K);
    s.number("U", c.harness.U);
    s.number("T0", c.harness.T0);
    s.number("t_end", c.harness.t_end);
    s.modes("phi_modes", c.harness.phi_modes);
    s.modes("f_modes", c.harness.f_modes);
    s.integer("N_u", c.harness.N_u);
    s.integer("M", c.harness.M);
    s.number("dt", c.harness.dt);
    s.integer("levels", c.harness.levels);
    s.reject_unknown();
  }
  {
    detail::SectionReader s(tree, "sweep");
    s.list("epsilons", c.sweep.epsilons);
    s.number("nu", c.sweep.nu);
    s.number("beta", c.sweep.beta);
    s.integer("K", c.sweep.K);
    s.integer("M", c.sweep.M);
    s.number("U", c.sweep.U);
    s.number("t_end", c.sweep.t_end);
    s.number("steps_per_epsilon", c.sweep.steps_per_epsilon);
    s.number("dt_max", c.sweep.dt_max);
    s.number("T0", c.sweep.T0);
    s.number("x_amplitude", c.sweep.x_amplitude);
    s.number("mollifier_width", c.sweep.mollifier_width);
    s.integer("limit_nodes", c.sweep.limit_nodes);
    s.integer("diagnostic_nodes", c.sweep.diagnostic_nodes);
    s.number("slack", c.sweep.slack);
    s.reject_unknown();
  }
  {
    detail::SectionReader s(tree, "stability");
    s.list("deltas", c.deltas);
    s.number("linear_slack", c.linear_slack);
    s.reject_unknown();
  }
  c.validate();
  return c;
}

inline RunConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in);
}

struct LoadedInitial {
  SolverState state;
  double normalization = 1.0;  // factor applied to reach unit mass
  double min_value = 0.0;      // smallest grid value before normalization
};

/// Builds f_i, rejects data that is negative on the grid, and normalizes the mass to 1.
inline LoadedInitial load_initial(const RunConfig& c) {
  LoadedInitial out{make_state(c.params), 1.0, 0.0};
  switch (c.initial.kind) {
    case InitialKind::maxwellian:
      fill_perturbed_maxwellian(out.state.f, c.initial.T0, {});
      break;
    case InitialKind::perturbed_maxwellian:
      fill_perturbed_maxwellian(out.state.f, c.initial.T0, c.initial.modes);
      break;
    case InitialKind::file: {
      SolverState s = read_snapshot(c.initial.path, c.params.K, c.params.N_u, c.params.u_max);
      out.state.f = std::move(s.f);
      break;
    }
  }
  out.min_value = grid_minimum(out.state.f);
  double peak = 0.0;
  for (std::size_t j = 0; j < out.state.f.nu(); ++j) peak = std::max(peak, std::abs(out.state.f(0, 0, j)));
  if (out.min_value < -1e-12 * peak) {
    throw ConfigError("initial data is negative on the grid (min " + std::to_string(out.min_value) +
                      "); reduce the perturbation amplitudes");
  }
  out.normalization = normalize_mass(out.state.f);
  return out;
}

inline SpectralField2D load_frozen_potential(const RunConfig& c) {
  switch (c.frozen.source) {
    case FrozenSource::zero:
      return SpectralField2D(c.params.K, true);
    case FrozenSource::modes:
      return make_potential(c.params.K, c.frozen.modes);
    case FrozenSource::snapshot: {
      SolverState s = read_snapshot(c.frozen.path, c.params.K, c.params.N_u, c.params.u_max);
      const MultiplierTable table(c.params.K, c.params.T, s.f.grid_ptr());
      return solve_potential(compute_density(s.f, table), table);
    }
  }
  return SpectralField2D(c.params.K, true);
}

}  // namespace gyrofp
