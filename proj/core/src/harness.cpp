#include "wavemap/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "wavemap/errors.hpp"
#include "wavemap/field_io.hpp"
#include "wavemap/reconstruct.hpp"

namespace wavemap {
namespace {

bool same_time(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  return out;
}

class Driver {
 public:
  explicit Driver(const RunConfig& cfg)
      : cfg_(cfg), g_(cfg.grid_cells), traj_(g_), snapshots_(cfg.resolved_snapshot_times()) {}

  Trajectory run() {
    if (!cfg_.output_dir.empty()) std::filesystem::create_directories(cfg_.output_dir);
    initialise();
    try {
      if (cfg_.mode == RunMode::FixedTau) {
        run_fixed();
      } else {
        run_adaptive();
      }
    } catch (const StepFloor&) {
      finish();
      throw;
    }
    finish();
    return std::move(traj_);
  }

 private:
  enum class Outcome { Ok, NotConverged, NotSmall };

  struct Attempt {
    Outcome outcome = Outcome::NotConverged;
    StepRecord rec;
    StepEstimate est;
    int iterations = 0;
  };

  void initialise() {
    switch (cfg_.data) {
      case InitialData::Bubble:
        std::tie(u_, w_) = initial_data(g_);
        break;
      case InitialData::Constant:
        std::tie(u_, w_) = constant_data(g_);
        break;
      case InitialData::Rotation:
        std::tie(u_, w_) = rotation_data(g_);
        break;
    }
    lap_ = laplacian(u_, g_);
    t_ = 0.0;
    traj_.initial_energy = energy(u_, w_, g_);
    traj_.estimator.bound = cfg_.initial_bound;
    traj_.max_unit_defect = max_unit_defect(u_);
    traj_.max_orthogonality_defect = max_orthogonality_defect(u_, w_);
    if (cfg_.store_dt >= 0.0) traj_.states.push_back({t_, u_, w_});
    write_due_snapshots();
  }

  Attempt attempt(double tau) {
    Attempt a;
    StepResult res;
    try {
      res = step(u_, w_, tau, cfg_.solver, g_);
    } catch (const NonConvergence&) {
      a.outcome = Outcome::NotConverged;
      return a;
    }
    a.iterations = res.iterations;
    a.rec = make_record(t_, tau, u_, w_, std::move(res.u), std::move(res.w), g_, &lap_);
    a.est = estimate_step(a.rec, cfg_.solver, g_);
    a.outcome = a.est.small ? Outcome::Ok : Outcome::NotSmall;
    return a;
  }

  void commit(Attempt& a) {
    StepRecord& rec = a.rec;
    if (cfg_.dump_residuals && traj_.accepted_steps == 0 && !cfg_.output_dir.empty()) dump_residuals(rec);

    const double int_alpha = rec.tau * a.est.alpha_hat;
    const double int_delta = rec.tau * a.est.delta_hat;
    traj_.estimator = accumulate(std::move(traj_.estimator), int_alpha, int_delta, rec.t_np1);
    traj_.estimator_rows.push_back({rec.t_np1, rec.tau, a.est.alpha_hat, a.est.delta_hat, int_alpha, int_delta,
                                    traj_.estimator.bound});

    t_ = rec.t_np1;
    u_ = std::move(rec.u_np1);
    w_ = std::move(rec.w_np1);
    lap_ = std::move(rec.lap_u_np1);
    ++traj_.accepted_steps;
    traj_.fp_iterations += a.iterations;

    const double e = energy(u_, w_, g_);
    const double e0 = traj_.initial_energy;
    const double drift = e0 > 0.0 ? std::abs(e - e0) / e0 : std::abs(e - e0);
    traj_.max_energy_drift = std::max(traj_.max_energy_drift, drift);
    traj_.max_unit_defect = std::max(traj_.max_unit_defect, max_unit_defect(u_));
    traj_.max_orthogonality_defect = std::max(traj_.max_orthogonality_defect, max_orthogonality_defect(u_, w_));

    if (should_store()) traj_.states.push_back({t_, u_, w_});
    write_due_snapshots();
  }

  bool should_store() const {
    if (cfg_.store_dt < 0.0) return false;
    if (cfg_.store_dt == 0.0) return true;
    const double q = t_ / cfg_.store_dt;
    return std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, q);
  }

  void trace(double tau, const char* decision, double tol, double density) {
    traj_.controller_trace.push_back({t_, tau, decision, tol, density});
  }

  void advance_fixed(double dt) {
    Attempt a = attempt(dt);
    if (a.outcome == Outcome::Ok) {
      trace(dt, "accept", std::numeric_limits<double>::quiet_NaN(), a.est.alpha_hat);
      commit(a);
      return;
    }
    // Halve and cover the same interval with two sub-steps so that the
    // output time grid stays nested.
    trace(dt, "substep", std::numeric_limits<double>::quiet_NaN(),
          a.outcome == Outcome::NotSmall ? a.est.alpha_hat : std::numeric_limits<double>::quiet_NaN());
    ++traj_.rejected_steps;
    const double half = 0.5 * dt;
    if (half < cfg_.controller.tau_min) throw StepFloor(t_, half);
    advance_fixed(half);
    advance_fixed(half);
  }

  void run_fixed() {
    while (t_ < cfg_.t_end) {
      const double dt = std::min(cfg_.tau, cfg_.t_end - t_);
      if (dt <= 1e-14 * cfg_.t_end) break;
      advance_fixed(dt);
    }
  }

  void run_adaptive() {
    AdaptiveController ctrl(cfg_.controller);
    double tau_nominal = cfg_.controller.tau0;
    while (t_ < cfg_.t_end) {
      const double dt = std::min(tau_nominal, cfg_.t_end - t_);
      if (dt <= 1e-14 * cfg_.t_end) break;
      Attempt a = attempt(dt);
      const bool ok = a.outcome == Outcome::Ok;
      const double density = ok ? a.est.alpha_hat : std::numeric_limits<double>::quiet_NaN();
      const auto decision =
          ctrl.decide(dt, ok ? a.est.alpha_hat : 0.0, ok ? a.est.delta_hat : 0.0, ok, t_);
      if (const auto* acc = std::get_if<AdaptiveController::Accept>(&decision)) {
        trace(dt, "accept", ctrl.current_tol(), density);
        const bool clamped = dt < tau_nominal;
        commit(a);
        if (!clamped) tau_nominal = acc->tau_next;
      } else {
        trace(dt, "reject", ctrl.current_tol(), density);
        ++traj_.rejected_steps;
        tau_nominal = std::get<AdaptiveController::Reject>(decision).tau_retry;
      }
    }
  }

  void write_due_snapshots() {
    while (next_snapshot_ < snapshots_.size() &&
           (snapshots_[next_snapshot_] <= t_ || same_time(snapshots_[next_snapshot_], t_))) {
      if (!cfg_.output_dir.empty()) {
        const auto stem = cfg_.output_dir / fmt::format("snap_{}", next_snapshot_);
        write_field(stem.string() + "_u.wmf", u_, g_);
        write_field(stem.string() + "_w.wmf", w_, g_);
        write_field_csv(stem.string() + "_u.csv", u_, g_, "u");
        const double last_tau = traj_.estimator_rows.empty() ? 0.0 : traj_.estimator_rows.back().tau;
        write_sidecar(stem.string() + ".txt", t_, last_tau);
      }
      ++next_snapshot_;
    }
  }

  void dump_residuals(const StepRecord& rec) {
    const ResidualSample rs = eval_residuals(rec, rec.t_n + 0.5 * rec.tau, g_);
    const auto& dir = cfg_.output_dir;
    write_field_csv(dir / "residual_r_u1.csv", rs.r_u1, g_, "r_u1_");
    write_field_csv(dir / "residual_r_u2.csv", rs.r_u2, g_, "r_u2_");
    write_field_csv(dir / "residual_r_u3.csv", rs.r_u3, g_, "r_u3_");
    write_field_csv(dir / "residual_r_w.csv", rs.r_w, g_, "r_w_");
    write_field_csv(dir / "residual_r_g.csv", rs.r_g, g_, "r_g_");
  }

  void finish() {
    traj_.final_state = {t_, u_, w_};
    if (cfg_.store_dt >= 0.0 && (traj_.states.empty() || !same_time(traj_.states.back().t, t_)))
      traj_.states.push_back({t_, u_, w_});
    if (cfg_.output_dir.empty()) return;
    auto est = open_output(cfg_.output_dir / "estimator.csv");
    write_estimator_csv(est, traj_.estimator_rows);
    auto ctl = open_output(cfg_.output_dir / "controller.csv");
    write_controller_csv(ctl, traj_.controller_trace);
  }

  RunConfig cfg_;
  Grid2D g_;
  Trajectory traj_;
  std::vector<double> snapshots_;
  std::size_t next_snapshot_ = 0;
  SphereField u_;
  MomentumField w_;
  VecField lap_;
  double t_ = 0.0;
};

std::string csv_number(double v) { return std::isnan(v) ? std::string() : fmt::format("{}", v); }

}  // namespace

Trajectory run(const RunConfig& cfg) {
  cfg.validate();
  return Driver(cfg).run();
}

std::pair<double, double> energy_norm_error(const Trajectory& coarse, const Trajectory& ref, const Grid2D& g) {
  if (!(coarse.grid == g) || !(ref.grid == g)) throw TimeMismatch("trajectories live on different grids");
  if (coarse.states.empty()) throw TimeMismatch("coarse trajectory stores no states");

  double err_w = 0.0;
  double err_gu = 0.0;
  for (const State& s : coarse.states) {
    const auto it = std::lower_bound(ref.states.begin(), ref.states.end(), s.t - 1e-12 * std::max(1.0, s.t),
                                     [](const State& r, double t) { return r.t < t; });
    if (it == ref.states.end() || !same_time(it->t, s.t))
      throw TimeMismatch(fmt::format("reference has no state at t={}", s.t));
    err_w = std::max(err_w, lp_norm(s.w - it->w, 2.0, g));
    err_gu = std::max(err_gu, lp_norm(grad_norm(s.u - it->u, g), 2.0, g));
  }
  return {err_w, err_gu};
}

double eoc(double e_coarse, double e_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0)) throw NonPositiveError();
  return std::log2(e_coarse / e_fine);
}

std::vector<EocRow> eoc_study(const RunConfig& base, const std::vector<double>& taus, double tau_ref) {
  if (taus.empty()) throw std::invalid_argument("eoc_study: no step sizes");
  std::vector<double> sorted = taus;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  for (double tau : sorted) {
    const double ratio = tau / tau_ref;
    const double level = std::log2(ratio);
    if (!(ratio >= 1.0) || std::abs(level - std::round(level)) > 1e-12)
      throw std::invalid_argument("eoc_study: step sizes must be dyadic multiples of tau_ref");
  }

  RunConfig cfg = base;
  cfg.mode = RunMode::FixedTau;
  cfg.output_dir.clear();
  cfg.default_snapshots = false;
  cfg.snapshot_times.clear();
  cfg.dump_residuals = false;

  RunConfig ref_cfg = cfg;
  ref_cfg.tau = tau_ref;
  ref_cfg.store_dt = sorted.back();
  const Trajectory ref = run(ref_cfg);
  const Grid2D g(cfg.grid_cells);

  std::vector<EocRow> rows;
  for (double tau : sorted) {
    RunConfig c = cfg;
    c.tau = tau;
    c.store_dt = tau;
    const Trajectory coarse = run(c);
    const auto [ew, egu] = energy_norm_error(coarse, ref, g);
    EocRow row{tau, ew, std::numeric_limits<double>::quiet_NaN(), egu, std::numeric_limits<double>::quiet_NaN()};
    if (!rows.empty()) {
      row.eoc_w = eoc(rows.back().err_w, ew);
      row.eoc_gu = eoc(rows.back().err_gu, egu);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_estimator_csv(std::ostream& out, const std::vector<EstimatorRow>& rows) {
  out << "t_j,tau_j,alpha_hat,delta_hat,int_alpha,int_delta,B_j\n";
  for (const auto& r : rows)
    out << fmt::format("{},{},{},{},{},{},{}\n", r.t, r.tau, r.alpha_hat, r.delta_hat, r.int_alpha, r.int_delta,
                       r.bound);
}

void write_controller_csv(std::ostream& out, const std::vector<ControllerEvent>& rows) {
  out << "t_j,tau_j,decision,current_tol,density\n";
  for (const auto& r : rows)
    out << fmt::format("{},{},{},{},{}\n", r.t, r.tau, r.decision, csv_number(r.current_tol), csv_number(r.density));
}

void write_eoc_csv(std::ostream& out, const std::vector<EocRow>& rows) {
  out << "tau,err_w,eoc_w,err_gu,eoc_gu\n";
  for (const auto& r : rows)
    out << fmt::format("{},{},{},{},{}\n", r.tau, r.err_w, csv_number(r.eoc_w), r.err_gu, csv_number(r.eoc_gu));
}

}  // namespace wavemap
