#include "wavemap/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wavemap/errors.hpp"

namespace wavemap {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Equidistribute:
      return "equidistribute";
    case Strategy::UpdatedTolerance:
      return "updated";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "equidistribute") return Strategy::Equidistribute;
  if (name == "updated") return Strategy::UpdatedTolerance;
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

void ControllerParams::validate() const {
  if (!(tol0 > 0.0)) throw std::invalid_argument("tol0 must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("shrink must lie in (0, 1)");
  if (!(grow > 1.0)) throw std::invalid_argument("grow must exceed 1");
  if (!(safety > 0.0 && safety < 1.0)) throw std::invalid_argument("safety must lie in (0, 1)");
  if (!(tau_min > 0.0 && tau_min <= tau_max)) throw std::invalid_argument("need 0 < tau_min <= tau_max");
  if (!(tau0 >= tau_min && tau0 <= tau_max)) throw std::invalid_argument("tau0 must lie in [tau_min, tau_max]");
}

AdaptiveController::AdaptiveController(ControllerParams params) : params_(params), current_tol_(params.tol0) {
  params_.validate();
}

AdaptiveController::Decision AdaptiveController::decide(double tau, double alpha_hat, double delta_hat,
                                                        bool fp_converged, double t) {
  const auto reject = [&]() -> Decision {
    const double retry = tau * params_.shrink;
    if (retry < params_.tau_min) throw StepFloor(t, retry);
    return Reject{retry};
  };

  if (!fp_converged) return reject();
  const double density = alpha_hat;
  if (density > current_tol_) return reject();

  const double tau_next = density < params_.safety * current_tol_ ? std::min(tau * params_.grow, params_.tau_max) : tau;
  if (params_.strategy == Strategy::UpdatedTolerance) current_tol_ *= std::exp(0.5 * tau * delta_hat);
  return Accept{tau_next};
}

}  // namespace wavemap
