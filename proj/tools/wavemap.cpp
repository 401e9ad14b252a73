// wavemap: command line driver.
//
//   wavemap run [--config FILE] [--out DIR] [--mode fixed|adaptive] [--tau T] ...
//   wavemap eoc [--config FILE] [--out DIR] --taus 2^-7,2^-8 --tau-ref 2^-13
//
// Flags override values from the config file. Exit codes: 0 success,
// 2 step size floor reached, 3 configuration error, 1 anything else.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wavemap/config.hpp"
#include "wavemap/errors.hpp"
#include "wavemap/harness.hpp"

namespace {

constexpr int kExitStepFloor = 2;
constexpr int kExitConfig = 3;

struct Overrides {
  std::string config;
  std::optional<std::string> out, mode, tau, grid, tend, strategy, tol0, data;
  bool dump_residuals = false;
  std::vector<std::string> settings;  // raw key=value pairs
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "Config file with 'key = value' lines");
  app->add_option("--out", o.out, "Output directory");
  app->add_option("--mode", o.mode, "fixed or adaptive");
  app->add_option("--tau", o.tau, "Step size for fixed mode, e.g. 2^-9");
  app->add_option("--grid", o.grid, "Number of cells per direction");
  app->add_option("--tend", o.tend, "Final time");
  app->add_option("--strategy", o.strategy, "equidistribute or updated");
  app->add_option("--tol0", o.tol0, "Initial tolerance for adaptive mode");
  app->add_option("--data", o.data, "bubble, constant or rotation");
  app->add_flag("--dump-residuals", o.dump_residuals, "Dump residual fields of the first step as CSV");
  app->add_option("--set", o.settings, "Extra key=value setting (repeatable)");
}

wavemap::RunConfig resolve(const Overrides& o) {
  wavemap::RunConfig cfg;
  if (!o.config.empty()) cfg = wavemap::load_config(o.config, cfg);
  const auto apply = [&cfg](const char* key, const std::optional<std::string>& v) {
    if (v) wavemap::apply_setting(cfg, key, *v);
  };
  for (const auto& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw wavemap::ConfigError("--set expects key=value, got '" + kv + "'");
    wavemap::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  apply("out", o.out);
  apply("mode", o.mode);
  apply("tau", o.tau);
  apply("grid", o.grid);
  apply("tend", o.tend);
  apply("strategy", o.strategy);
  apply("tol0", o.tol0);
  apply("data", o.data);
  if (o.dump_residuals) cfg.dump_residuals = true;
  cfg.validate();
  return cfg;
}

int do_run(const Overrides& o) {
  const wavemap::RunConfig cfg = resolve(o);
  const wavemap::Trajectory traj = wavemap::run(cfg);
  fmt::print("t_end={} accepted={} rejected={} fp_iterations={}\n", traj.final_state.t, traj.accepted_steps,
             traj.rejected_steps, traj.fp_iterations);
  fmt::print("bound={:.6e} energy_drift={:.3e} unit_defect={:.3e}\n", traj.estimator.bound, traj.max_energy_drift,
             traj.max_unit_defect);
  return 0;
}

int do_eoc(const Overrides& o, const std::vector<std::string>& tau_text, const std::string& tau_ref_text) {
  wavemap::RunConfig cfg = resolve(o);
  std::vector<double> taus;
  for (const auto& s : tau_text) taus.push_back(wavemap::parse_number(s));
  const double tau_ref = wavemap::parse_number(tau_ref_text);
  const auto rows = wavemap::eoc_study(cfg, taus, tau_ref);

  std::ostringstream table;
  wavemap::write_eoc_csv(table, rows);
  std::fputs(table.str().c_str(), stdout);
  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream out(cfg.output_dir / "eoc.csv");
    out << table.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Angular-momentum midpoint simulator for wave maps into the sphere"};
  app.require_subcommand(1);

  Overrides run_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one simulation");
  add_common(run_cmd, run_opts);

  Overrides eoc_opts;
  std::vector<std::string> taus{"2^-7", "2^-8", "2^-9", "2^-10"};
  std::string tau_ref = "2^-13";
  CLI::App* eoc_cmd = app.add_subcommand("eoc", "Fixed-step convergence study against a fine reference");
  add_common(eoc_cmd, eoc_opts);
  eoc_cmd->add_option("--taus", taus, "Coarse step sizes")->delimiter(',');
  eoc_cmd->add_option("--tau-ref", tau_ref, "Reference step size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return do_run(run_opts);
    return do_eoc(eoc_opts, taus, tau_ref);
  } catch (const wavemap::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const wavemap::StepFloor& e) {
    fmt::print(stderr, "{}\n", e.what());
    return kExitStepFloor;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
