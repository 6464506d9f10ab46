// gyrofp: command-line driver for the gyro-kinetic Fokker-Planck solver.
//
// Exit status: 0 success, 1 monitor / convergence failure, 2 usage or config error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gyrofp/gyrofp.hpp"

namespace fs = std::filesystem;
using namespace gyrofp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMonitor = 1;
constexpr int kExitUsage = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_verdicts(std::ostream& out, const MonitorReport& report) {
  for (auto q : kInequalities) {
    bool ok = true;
    for (const auto& r : report.results) ok = ok && (r.which != q || r.pass);
    out << "monitor " << to_string(q) << ' ' << (ok ? "PASS" : "FAIL") << " worst_margin " << fmt(report.worst(q))
        << '\n';
  }
  out << "monitors " << (report.pass ? "PASS" : "FAIL") << '\n';
}

std::string prepare_output(const RunConfig& c, const std::string& override_dir) {
  const std::string dir = override_dir.empty() ? c.output_dir : override_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
  return dir;
}

int run_solver(const RunConfig& c, const std::string& out_dir, bool frozen) {
  const std::string dir = prepare_output(c, out_dir);
  LoadedInitial init = load_initial(c);
  std::cerr << "initial data normalized to unit mass, factor " << fmt(init.normalization) << '\n';
  std::optional<SpectralField2D> phi;
  if (frozen) phi = load_frozen_potential(c);
  Solver solver(c.params, phi, c.courant, c.dt_max);
  const auto started = std::chrono::steady_clock::now();
  RunResult r = run(solver, init.state, c.run_options());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  write_series(dir + "/series.csv", r.records);
  write_snapshot(r.state, dir + "/final.gfp");
  if (r.last_valid) write_snapshot(*r.last_valid, dir + "/last_valid.gfp");

  std::cout << "mode " << (frozen ? "frozen_phi" : "nonlinear") << '\n';
  std::cout << "status " << to_string(r.status) << '\n';
  std::cout << "t " << fmt(r.state.time) << " steps " << r.state.step_count << " seconds " << fmt(seconds) << '\n';
  std::cout << "mass_drift " << fmt(r.mass_drift) << '\n';
  if (!r.records.empty()) {
    const auto& last = r.records.back();
    std::cout << "min_f " << fmt(last.min_f) << " boundary_mass_fraction " << fmt(last.boundary_mass_fraction) << '\n';
    if (last.boundary_mass_fraction > 1e-10) std::cerr << "warning: mass near u_max exceeds 1e-10\n";
  }
  print_verdicts(std::cout, r.monitors);
  if (!r.message.empty()) std::cout << "message " << r.message << '\n';
  std::cout << "series " << dir << "/series.csv\n";
  return r.status == RunStatus::completed && r.monitors.pass ? kExitOk : kExitMonitor;
}

int run_harness(const RunConfig& c) {
  const RadialReport report = radial_equivalence(c.harness);
  std::cout << "level N_u M dt error reference seconds\n";
  bool decreasing = true;
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const auto& L = report.levels[i];
    std::cout << i << ' ' << L.N_u << ' ' << L.M << ' ' << fmt(L.dt) << ' ' << fmt(L.error) << ' '
              << fmt(L.reference) << ' ' << fmt(L.seconds) << '\n';
    if (i > 0) {
      std::cout << "ratio " << fmt(report.ratio(i)) << '\n';
      decreasing = decreasing && report.levels[i].error < report.levels[i - 1].error;
    }
  }
  std::cout << "radial_equivalence " << (decreasing ? "PASS" : "FAIL") << '\n';
  return decreasing ? kExitOk : kExitMonitor;
}

int run_sweep(const RunConfig& c) {
  const SweepReport report = epsilon_sweep(c.sweep);
  std::cout << "epsilon error l1_mollified l1_instant mass_drift steps seconds\n";
  for (const auto& e : report.entries) {
    std::cout << fmt(e.epsilon) << ' ' << fmt(e.error) << ' ' << fmt(e.l1_mollified) << ' ' << fmt(e.l1_instant)
              << ' ' << fmt(e.mass_drift) << ' ' << e.steps << ' ' << fmt(e.seconds) << '\n';
  }
  std::cout << "error_monotone " << (report.error_monotone ? "yes" : "no") << '\n';
  std::cout << "error_strict " << (report.error_strict ? "yes" : "no") << '\n';
  std::cout << "l1_decreasing " << (report.l1_decreasing ? "yes" : "no") << '\n';
  if (!report.message.empty()) std::cout << "message " << report.message << '\n';
  return report.error_monotone ? kExitOk : kExitMonitor;
}

int run_stability(const RunConfig& c) {
  LoadedInitial init = load_initial(c);
  std::cerr << "initial data normalized to unit mass, factor " << fmt(init.normalization) << '\n';
  const StabilityReport report = stability_experiment(c.stability(), init.state);
  std::cout << "delta max_s early_s status\n";
  for (const auto& tr : report.traces) {
    std::cout << fmt(tr.delta) << ' ' << fmt(tr.max_s) << ' ' << (tr.s.size() > 1 ? fmt(tr.s[1]) : "nan") << ' '
              << to_string(tr.status) << '\n';
  }
  std::cout << "twin_identical " << (report.twin_identical ? "yes" : "no") << " twin_max " << fmt(report.twin_max)
            << '\n';
  std::cout << "monotone " << (report.monotone ? "yes" : "no") << '\n';
  std::cout << "near_linear " << (report.near_linear ? "yes" : "no") << " ratio " << fmt(report.linear_ratio) << '\n';
  if (!report.message.empty()) std::cout << "message " << report.message << '\n';
  std::cout << "stability " << (report.pass() ? "PASS" : "FAIL") << '\n';
  return report.pass() ? kExitOk : kExitMonitor;
}

int run_check(const std::string& series_path, const std::string& config_path, std::optional<double> nu,
              std::optional<double> beta, std::optional<double> slack) {
  double n = PhysicalParams{}.nu;
  double b = PhysicalParams{}.beta;
  double s = RunOptions{}.monitor_slack;
  if (!config_path.empty()) {
    const RunConfig c = load_config(config_path);
    n = c.params.nu;
    b = c.params.beta;
    s = c.monitor_slack;
  }
  if (nu) n = *nu;
  if (beta) b = *beta;
  if (slack) s = *slack;
  const auto series = read_series(series_path);
  const MonitorReport report = check_apriori(series, n, b, s);
  std::cout << "records " << series.size() << '\n';
  print_verdicts(std::cout, report);
  return report.pass ? kExitOk : kExitMonitor;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gyrofp: gyro-kinetic Fokker-Planck solver with a-priori bound monitors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string config_path;
  std::string out_dir;

  auto* run_cmd = app.add_subcommand("run", "Integrate the system in the mode given by the config (default nonlinear)");
  run_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("-o,--output", out_dir, "Output directory (overrides run.output_dir)");

  auto* frozen_cmd = app.add_subcommand("frozen", "Integrate with the potential fixed by [frozen]");
  frozen_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  frozen_cmd->add_option("-o,--output", out_dir, "Output directory (overrides run.output_dir)");

  auto* harness_cmd = app.add_subcommand("harness", "4D harness: radial equivalence against the 1D solver");
  harness_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  auto* sweep_cmd = app.add_subcommand("sweep", "epsilon sweep of the gyro-coordinate equation");
  sweep_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  auto* stab_cmd = app.add_subcommand("stability", "Two-trajectory stability experiment over the delta list");
  stab_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  std::string series_path;
  double nu_value = 0.0;
  double beta_value = 0.0;
  double slack_value = 0.0;
  auto* check_cmd = app.add_subcommand("check", "Re-run the a-priori monitors on a saved CSV series");
  check_cmd->add_option("series", series_path, "CSV series")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("-c,--config", config_path, "Config supplying nu, beta and the slack")
      ->check(CLI::ExistingFile);
  auto* nu_opt = check_cmd->add_option("--nu", nu_value, "Override nu");
  auto* beta_opt = check_cmd->add_option("--beta", beta_value, "Override beta");
  auto* slack_opt = check_cmd->add_option("--slack", slack_value, "Override the relative slack");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*check_cmd) {
      auto opt = [](CLI::Option* o, double v) { return o->count() ? std::optional<double>(v) : std::nullopt; };
      return run_check(series_path, config_path, opt(nu_opt, nu_value), opt(beta_opt, beta_value),
                       opt(slack_opt, slack_value));
    }
    const RunConfig c = load_config(config_path);
    if (*frozen_cmd) return run_solver(c, out_dir, true);
    if (*harness_cmd) return run_harness(c);
    if (*sweep_cmd) return run_sweep(c);
    if (*stab_cmd) return run_stability(c);
    switch (c.mode) {
      case RunMode::nonlinear: return run_solver(c, out_dir, false);
      case RunMode::frozen_phi: return run_solver(c, out_dir, true);
      case RunMode::harness_4d: return run_harness(c);
      case RunMode::epsilon_sweep: return run_sweep(c);
      case RunMode::stability_pair: return run_stability(c);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMonitor;
  }
  return kExitOk;
}
