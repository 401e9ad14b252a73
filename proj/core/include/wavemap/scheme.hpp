#pragma once

// Angular-momentum midpoint scheme for wave maps into S^2:
//   (u^{k+1} - u^k)/tau = u^{k+1/2} x w^{k+1/2}
//   (w^{k+1} - w^k)/tau = Δ_h u^{k+1/2} x u^{k+1/2}
// solved per step by a simultaneous (Jacobi) fixed-point iteration.

#include <utility>

#include "wavemap/grid.hpp"

namespace wavemap {

struct SolverConfig {
  double fp_tol = 1e-12;   // max-node change that ends the fixed-point loop
  int fp_max_iter = 200;
  double unit_tol = 1e-9;  // admissible | |u| - 1 | and |u . w|
  double c_q = 4.0;        // squared Sobolev embedding constant H^1 -> L^{2p/(p-2)}
  double p_exp = 4.0;      // exponent p > 2 in the delta bound

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

/// One time interval's endpoint data; the only input reconstruction and
/// estimation need.
struct StepRecord {
  double t_n = 0.0;
  double t_np1 = 0.0;
  double tau = 0.0;
  SphereField u_n;
  SphereField u_np1;
  MomentumField w_n;
  MomentumField w_np1;
  VecField lap_u_n;
  VecField lap_u_np1;
};

/// Assembles a record; `lap_u_n` is reused from the previous step when given.
StepRecord make_record(double t_n, double tau, SphereField u_n, MomentumField w_n,
                       SphereField u_np1, MomentumField w_np1, const Grid2D& g,
                       const VecField* lap_u_n = nullptr);

struct StepResult {
  SphereField u;
  MomentumField w;
  int iterations = 0;
};

/// Advances (u_n, w_n) by tau. Throws NonConvergence when fp_max_iter is reached
/// or the iterates blow up; the caller is expected to retry with a smaller step.
StepResult step(const SphereField& u_n, const MomentumField& w_n, double tau, const SolverConfig& cfg,
                const Grid2D& g);

/// Bubble initial data: a(x) = (1 - 2|x|)^4,
///   u = (2a x1, 2a x2, a^2 - |x|^2) / (a^2 + |x|^2) for |x| <= 1/2, (0, 0, -1) outside,
/// and w = 0 (the initial velocity vanishes).
std::pair<SphereField, MomentumField> initial_data(const Grid2D& g);

/// Spatially constant u0 with zero momentum.
std::pair<SphereField, MomentumField> constant_data(const Grid2D& g, Vec3 u0 = {0.0, 0.0, 1.0});

/// Spatially constant u0 and w0; w0 is projected orthogonal to u0.
std::pair<SphereField, MomentumField> rotation_data(const Grid2D& g, Vec3 u0 = {1.0, 0.0, 0.0},
                                                    Vec3 w0 = {0.0, 0.0, 1.0});

/// Discrete energy (1/2)(||w||^2 + <-Δ_h u, u>). The Dirichlet part is the form
/// the scheme conserves exactly at the fixed point.
double energy(const SphereField& u, const MomentumField& w, const Grid2D& g);

/// Closed-form implicit-midpoint (Cayley) map for u' = u x w with constant w:
/// rotation of u about w by the angle -2 atan(tau |w| / 2).
Vec3 cayley_step(const Vec3& u, const Vec3& w, double tau);

}  // namespace wavemap
