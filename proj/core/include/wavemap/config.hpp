#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "wavemap/adapt.hpp"
#include "wavemap/scheme.hpp"

namespace wavemap {

enum class RunMode { FixedTau, Adaptive };
enum class InitialData { Bubble, Constant, Rotation };

struct RunConfig {
  int grid_cells = 32;
  RunMode mode = RunMode::FixedTau;
  double tau = 1.0 / 512;  // fixed-step size
  ControllerParams controller;
  double t_end = 0.2;
  SolverConfig solver;
  double initial_bound = 0.0;  // B_0, a bound on sqrt(H(0))
  InitialData data = InitialData::Bubble;

  std::filesystem::path output_dir;  // empty: no files are written
  // Absolute output times; empty with default_snapshots = true means
  // eight equally spaced times in [0, t_end].
  std::vector<double> snapshot_times;
  bool default_snapshots = true;
  // < 0 keeps only the final state, 0 keeps every step, > 0 keeps multiples of store_dt.
  double store_dt = -1.0;
  bool dump_residuals = false;

  /// Throws ConfigError.
  void validate() const;
  std::vector<double> resolved_snapshot_times() const;
};

/// Applies one `key = value` setting. Keys: grid, mode, tau, tend, strategy, tol0,
/// grow, shrink, safety, tau_min, tau_max, tau0, fp_tol, fp_max_iter, unit_tol,
/// c_q, p_exp, b0, data, out, snapshots, store_dt, dump_residuals.
/// Throws ConfigError on unknown keys or malformed values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Reads `key = value` lines ('#' starts a comment) on top of `cfg`.
void parse_config(std::istream& in, RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Parses "0.5", "2^-9" or "1/512".
double parse_number(std::string_view text);

}  // namespace wavemap
