#include "wavemap/reconstruct.hpp"

#include <limits>
#include <stdexcept>

#include "wavemap/errors.hpp"

namespace wavemap {
namespace {

struct Weights {
  double l0;     // (t_{n+1} - t) / tau
  double l1;     // (t - t_n) / tau
  double bump;   // (t - t_n)(t_{n+1} - t) / tau
};

Weights weights_at(const StepRecord& rec, double t) {
  if (!(rec.tau > 0.0)) throw std::invalid_argument("record has non-positive tau");
  if (t < rec.t_n || t > rec.t_np1) throw std::invalid_argument("time outside the record's interval");
  const double l1 = (t - rec.t_n) / rec.tau;
  return {1.0 - l1, l1, (t - rec.t_n) * (rec.t_np1 - t) / rec.tau};
}

}  // namespace

ATerms a_terms(const StepRecord& rec) {
  const std::size_t n = rec.u_n.size();
  ATerms out{VecField(Grid2D(rec.u_n.nodes() - 1)), VecField(Grid2D(rec.u_n.nodes() - 1))};
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 du = 0.5 * (rec.u_np1[k] - rec.u_n[k]);
    const Vec3 dw = 0.5 * (rec.w_np1[k] - rec.w_n[k]);
    const Vec3 dlap = 0.5 * (rec.lap_u_np1[k] - rec.lap_u_n[k]);
    out.a_u[k] = cross(du, dw);
    out.a_w[k] = cross(dlap, du);
  }
  return out;
}

Reconstruction eval_ustar_wtilde(const StepRecord& rec, double t) {
  const Weights wt = weights_at(rec, t);
  const Grid2D g(rec.u_n.nodes() - 1);
  Reconstruction out{VecField(g), VecField(g)};
  for (std::size_t k = 0; k < rec.u_n.size(); ++k) {
    const Vec3 dp = cross(rec.u_np1[k], rec.w_np1[k]) - cross(rec.u_n[k], rec.w_n[k]);
    const Vec3 dq = cross(rec.lap_u_np1[k], rec.u_np1[k]) - cross(rec.lap_u_n[k], rec.u_n[k]);
    out.ustar[k] = wt.l0 * rec.u_n[k] + wt.l1 * rec.u_np1[k] - (0.5 * wt.bump) * dp;
    out.wtilde[k] = wt.l0 * rec.w_n[k] + wt.l1 * rec.w_np1[k] - (0.5 * wt.bump) * dq;
  }
  return out;
}

VecField eval_dt_ustar(const StepRecord& rec, double t) {
  const Weights wt = weights_at(rec, t);
  VecField out(Grid2D(rec.u_n.nodes() - 1));
  for (std::size_t k = 0; k < rec.u_n.size(); ++k) {
    const Vec3 p0 = cross(rec.u_n[k], rec.w_n[k]);
    const Vec3 p1 = cross(rec.u_np1[k], rec.w_np1[k]);
    const Vec3 a_u = cross(0.5 * (rec.u_np1[k] - rec.u_n[k]), 0.5 * (rec.w_np1[k] - rec.w_n[k]));
    out[k] = wt.l0 * p0 + wt.l1 * p1 - a_u;
  }
  return out;
}

namespace {

SphereField project(const VecField& ustar) {
  SphereField out = ustar;
  double min_norm = std::numeric_limits<double>::infinity();
  for (Vec3& v : out.values()) {
    const double len = norm(v);
    min_norm = std::min(min_norm, len);
    v = v / len;
  }
  if (!(min_norm >= kDegenerateNormFloor)) throw DegenerateNorm(min_norm);
  return out;
}

}  // namespace

SphereField eval_utilde(const StepRecord& rec, double t) { return project(eval_ustar_wtilde(rec, t).ustar); }

VecField ResidualSample::r_u() const { return r_u1 + r_u2 + r_u3; }

ResidualSample eval_residuals(const StepRecord& rec, double t, const Grid2D& g) {
  if (!(t > rec.t_n && t < rec.t_np1)) throw std::invalid_argument("eval_residuals: t must lie inside the interval");
  const Weights wt = weights_at(rec, t);
  Reconstruction recon = eval_ustar_wtilde(rec, t);
  const VecField dt_ustar = eval_dt_ustar(rec, t);
  SphereField utilde = project(recon.ustar);
  const VecField lap_utilde = laplacian(utilde, g);
  const ATerms a = a_terms(rec);

  ResidualSample out;
  out.t = t;
  out.r_u1 = VecField(g);
  out.r_u2 = VecField(g);
  out.r_u3 = VecField(g);
  out.r_w = VecField(g);
  out.r_g = VecField(g);

  for (std::size_t k = 0; k < utilde.size(); ++k) {
    const Vec3& ut = utilde[k];
    const Vec3& wtil = recon.wtilde[k];
    const Vec3& us = recon.ustar[k];
    const Vec3& dus = dt_ustar[k];

    const Vec3 interp_p = wt.l0 * cross(rec.u_n[k], rec.w_n[k]) + wt.l1 * cross(rec.u_np1[k], rec.w_np1[k]);
    const Vec3 interp_q =
        wt.l0 * cross(rec.lap_u_n[k], rec.u_n[k]) + wt.l1 * cross(rec.lap_u_np1[k], rec.u_np1[k]);

    const double len = norm(us);
    const Vec3 projection_defect = dus - dus / len + (dot(dus, us) / (len * len * len)) * us;

    out.r_u1[k] = interp_p - cross(ut, wtil);
    out.r_u2[k] = -a.a_u[k];
    out.r_u3[k] = -projection_defect;
    out.r_w[k] = interp_q - cross(lap_utilde[k], ut) - a.a_w[k];

    const double uw = dot(ut, wtil);
    out.r_g[k] = uw * wtil - (uw * uw) * ut;
  }

  out.grad_r_u1 = grad_norm(out.r_u1, g);
  out.grad_r_u2 = grad_norm(out.r_u2, g);
  out.grad_r_u3 = grad_norm(out.r_u3, g);
  out.grad_r_u = grad_norm(out.r_u(), g);
  out.utilde = std::move(utilde);
  out.wtilde = std::move(recon.wtilde);
  return out;
}

}  // namespace wavemap
