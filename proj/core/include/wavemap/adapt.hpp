#pragma once

#include <string_view>
#include <variant>

namespace wavemap {

enum class Strategy {
  Equidistribute,    // fixed tolerance on the residual density alpha_hat
  UpdatedTolerance,  // tolerance grows by exp(tau * delta_hat / 2) per accepted step
};

std::string_view to_string(Strategy s);
/// Accepts "equidistribute" and "updated"; throws std::invalid_argument otherwise.
Strategy parse_strategy(std::string_view name);

struct ControllerParams {
  Strategy strategy = Strategy::Equidistribute;
  double tol0 = 1e-4;
  double grow = 1.2;
  double shrink = 0.5;
  double safety = 0.4;
  double tau_min = 1.0 / (1 << 20);
  double tau_max = 1.0 / (1 << 6);
  double tau0 = 1.0 / (1 << 10);  // first attempted step

  void validate() const;
};

class AdaptiveController {
 public:
  explicit AdaptiveController(ControllerParams params);

  const ControllerParams& params() const { return params_; }
  Strategy strategy() const { return params_.strategy; }
  double current_tol() const { return current_tol_; }

  struct Accept {
    double tau_next;
  };
  struct Reject {
    double tau_retry;
  };
  using Decision = std::variant<Accept, Reject>;

  /// Classifies an attempted step. The density of interval j is alpha_hat_j
  /// itself since the residual bounds are uniform in time on the interval.
  /// Throws StepFloor (with time `t`) if a rejection would go below tau_min.
  Decision decide(double tau, double alpha_hat, double delta_hat, bool fp_converged, double t = 0.0);

 private:
  ControllerParams params_;
  double current_tol_;
};

}  // namespace wavemap
