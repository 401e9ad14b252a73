#pragma once

// Time reconstructions of the discrete solution on one interval [t_n, t_{n+1}]:
//   u*(t) = û(t) - (1/2) s(t) (u^{n+1} x w^{n+1} - u^n x w^n)
//   w~(t) = ŵ(t) - (1/2) s(t) (Δu^{n+1} x u^{n+1} - Δu^n x u^n)
//   ũ(t)  = u*(t) / |u*(t)|
// with s(t) = (t - t_n)(t_{n+1} - t) / tau and û, ŵ the linear interpolants.
// u*, w~ are the integrals of I_1[û x ŵ] - a_u and I_1[Δû x û] - a_w.

#include "wavemap/grid.hpp"
#include "wavemap/scheme.hpp"

namespace wavemap {

struct ATerms {
  VecField a_u;  // ((u^{n+1} - u^n)/2) x ((w^{n+1} - w^n)/2)
  VecField a_w;  // ((Δu^{n+1} - Δu^n)/2) x ((u^{n+1} - u^n)/2)
};

ATerms a_terms(const StepRecord& rec);

struct Reconstruction {
  VecField ustar;
  VecField wtilde;
};

/// Requires t in [t_n, t_{n+1}].
Reconstruction eval_ustar_wtilde(const StepRecord& rec, double t);

/// Closed-form time derivative of u*: I_1[û x ŵ](t) - a_u.
VecField eval_dt_ustar(const StepRecord& rec, double t);

/// Floor on |u*| below which projection is refused.
inline constexpr double kDegenerateNormFloor = 0.25;

/// ũ = u*/|u*|. Throws DegenerateNorm if |u*| < 1/4 anywhere.
SphereField eval_utilde(const StepRecord& rec, double t);

/// Residuals of the projected reconstruction, signed so that
///   ∂_t ũ = ũ x w~ + (r_u1 + r_u2 + r_u3),   ∂_t w~ = Δ_h ũ x ũ + r_w.
struct ResidualSample {
  double t = 0.0;
  VecField r_u1;  // interpolation error of ũ x w~
  VecField r_u2;  // -a_u, constant on the interval
  VecField r_u3;  // projection defect of ∂_t u*
  VecField r_w;   // interpolation error of Δũ x ũ plus -a_w
  VecField r_g;   // (ũ.w~) w~ - |ũ.w~|^2 ũ
  ScalarField grad_r_u;   // |∇(r_u1 + r_u2 + r_u3)|, centred differences
  ScalarField grad_r_u1;
  ScalarField grad_r_u2;
  ScalarField grad_r_u3;
  SphereField utilde;
  VecField wtilde;

  VecField r_u() const;
};

/// Requires t strictly inside (t_n, t_{n+1}).
ResidualSample eval_residuals(const StepRecord& rec, double t, const Grid2D& g);

}  // namespace wavemap
