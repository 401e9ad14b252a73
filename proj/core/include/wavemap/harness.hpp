#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "wavemap/config.hpp"
#include "wavemap/estimator.hpp"
#include "wavemap/grid.hpp"

namespace wavemap {

struct State {
  double t = 0.0;
  SphereField u;
  MomentumField w;
};

/// One row of estimator.csv.
struct EstimatorRow {
  double t = 0.0;
  double tau = 0.0;
  double alpha_hat = 0.0;
  double delta_hat = 0.0;
  double int_alpha = 0.0;
  double int_delta = 0.0;
  double bound = 0.0;
};

/// One row of controller.csv; `decision` is accept, reject or substep.
struct ControllerEvent {
  double t = 0.0;
  double tau = 0.0;
  std::string decision;
  double current_tol = 0.0;
  double density = 0.0;
};

struct Trajectory {
  explicit Trajectory(const Grid2D& g) : grid(g) {}

  Grid2D grid;
  std::vector<State> states;  // stored per RunConfig::store_dt, increasing in t
  State final_state;
  EstimatorState estimator;
  std::vector<EstimatorRow> estimator_rows;
  std::vector<ControllerEvent> controller_trace;

  int accepted_steps = 0;
  int rejected_steps = 0;
  int fp_iterations = 0;
  double initial_energy = 0.0;
  double max_energy_drift = 0.0;  // relative to the initial energy when it is positive
  double max_unit_defect = 0.0;
  double max_orthogonality_defect = 0.0;
};

/// Runs the configured simulation from t = 0 to t_end and, when an output
/// directory is set, writes estimator.csv, controller.csv and snapshots.
/// Throws StepFloor when the step size cannot be reduced any further.
Trajectory run(const RunConfig& cfg);

/// max over the coarse stored times of ||w_h - w_ref|| and ||∇u_h - ∇u_ref|| in L^2.
/// Every coarse time must also be a reference time; otherwise TimeMismatch.
std::pair<double, double> energy_norm_error(const Trajectory& coarse, const Trajectory& ref, const Grid2D& g);

/// log2(e_coarse / e_fine); throws NonPositiveError unless both are positive.
double eoc(double e_coarse, double e_fine);

struct EocRow {
  double tau = 0.0;
  double err_w = 0.0;
  double eoc_w = 0.0;  // NaN on the first row
  double err_gu = 0.0;
  double eoc_gu = 0.0;
};

/// Fixed-step self-convergence study on `base`'s grid against a run at tau_ref.
/// taus are sorted coarse to fine; each must be a dyadic multiple of tau_ref.
std::vector<EocRow> eoc_study(const RunConfig& base, const std::vector<double>& taus, double tau_ref);

void write_estimator_csv(std::ostream& out, const std::vector<EstimatorRow>& rows);
void write_controller_csv(std::ostream& out, const std::vector<ControllerEvent>& rows);
void write_eoc_csv(std::ostream& out, const std::vector<EocRow>& rows);

}  // namespace wavemap
