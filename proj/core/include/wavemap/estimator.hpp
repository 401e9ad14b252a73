#pragma once

// Computable a posteriori bounds for the midpoint scheme: pointwise residual
// majorants from endpoint data, the alpha/delta upper bounds of the weak-strong
// stability estimate, and its Gronwall-type accumulation over the time steps.

#include <vector>

#include "wavemap/grid.hpp"
#include "wavemap/scheme.hpp"

namespace wavemap {

/// Pointwise endpoint quantities for one interval. Differences are
/// (n+1) minus (n); gradients are centred, second derivatives use Δ_h.
struct LocalBounds {
  ScalarField A_u;     // |u^{n+1} - u^n|
  ScalarField A_u_x;   // |∇(u^{n+1} - u^n)|
  ScalarField A_u_xx;  // |Δ(u^{n+1} - u^n)|
  ScalarField A_w;     // |w^{n+1} - w^n|
  ScalarField A_w_x;   // |∇(w^{n+1} - w^n)|
  ScalarField B_u;     // |u^{n+1} x w^{n+1} - u^n x w^n|
  ScalarField B_u_x;
  ScalarField B_u_xx;
  ScalarField B_w;     // |Δu^{n+1} x u^{n+1} - Δu^n x u^n|
  ScalarField B_w_x;
  ScalarField C_w;     // max(|w^n|, |w^{n+1}|)
  ScalarField C_u_x;   // max(|∇u^n|, |∇u^{n+1}|)
  ScalarField C_w_x;   // max(|∇w^n|, |∇w^{n+1}|)
  ScalarField C_u_xx;  // max(|Δu^n|, |Δu^{n+1}|)
};

LocalBounds local_quantities(const StepRecord& rec, const Grid2D& g);

/// (A^u)^2 + tau B^u < 1/4 at every node.
bool check_smallness(const LocalBounds& lb, double tau);

/// Pointwise majorants of the residual parts and their gradients.
struct ResidualBoundFields {
  ScalarField bd_ru1;
  ScalarField bd_grad_ru1;
  ScalarField bd_ru2;
  ScalarField bd_grad_ru2;
  ScalarField bd_ru3;
  ScalarField bd_grad_ru3;
  ScalarField bd_rw;
  ScalarField bd_rg;
  ScalarField bd_ru;       // bd_ru1 + bd_ru2 + bd_ru3
  ScalarField bd_grad_ru;  // sum of the three gradient bounds
};

/// Throws SmallnessViolated unless check_smallness(lb, tau).
ResidualBoundFields residual_bounds(const LocalBounds& lb, double tau);

/// Majorant of |w~| on the interval: C^w + tau B^w.
ScalarField momentum_majorant(const LocalBounds& lb, double tau);
/// Majorant of |∇ũ|: 2 (C^u_x + tau B^u_x).
ScalarField gradient_majorant(const LocalBounds& lb, double tau);

/// alpha_hat = ||bd_rg + bd_ru W + bd_rw|| + ||bd_ru|| + ||bd_grad_ru||, all in L^2.
double alpha_hat(const ResidualBoundFields& rbf, const LocalBounds& lb, double tau, const Grid2D& g);

/// delta_hat = 1 + c_q ||G^2 + W^2||_p + 2 c_q ||W||_{2p}^2 + 2 c_q ||G||_{2p} ||W||_{2p} + 4 ||W||_inf.
double delta_hat(const LocalBounds& lb, double tau, const SolverConfig& cfg, const Grid2D& g);

struct EstimatorEntry {
  double t = 0.0;          // right end of the interval
  double int_alpha = 0.0;  // tau * alpha_hat
  double int_delta = 0.0;  // tau * delta_hat
  double bound = 0.0;      // B_j
};

/// Running bound on sqrt(H(t_j)): B_j = (B_{j-1} + ∫alpha) exp(∫delta / 2).
struct EstimatorState {
  int j = 0;
  double bound = 0.0;       // B_j; B_0 bounds sqrt(H(0))
  double delta_total = 0.0; // Σ ∫delta
  std::vector<EstimatorEntry> history;
};

/// Returns the updated state; throws std::invalid_argument on negative integrals.
EstimatorState accumulate(EstimatorState state, double int_alpha, double int_delta, double t = 0.0);

/// Everything the driver needs from one interval.
struct StepEstimate {
  bool small = false;
  double alpha_hat = 0.0;
  double delta_hat = 0.0;
};

/// local_quantities + check_smallness + residual_bounds + alpha_hat + delta_hat.
StepEstimate estimate_step(const StepRecord& rec, const SolverConfig& cfg, const Grid2D& g);

}  // namespace wavemap
