#include "wavemap/estimator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wavemap/errors.hpp"

namespace wavemap {
namespace {

ScalarField pointwise_max(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return std::max(x, y); });
}

}  // namespace

LocalBounds local_quantities(const StepRecord& rec, const Grid2D& g) {
  const VecField du = rec.u_np1 - rec.u_n;
  const VecField dw = rec.w_np1 - rec.w_n;
  const VecField dp = cross(rec.u_np1, rec.w_np1) - cross(rec.u_n, rec.w_n);
  const VecField dq = cross(rec.lap_u_np1, rec.u_np1) - cross(rec.lap_u_n, rec.u_n);

  LocalBounds lb;
  lb.A_u = magnitude(du);
  lb.A_u_x = grad_norm(du, g);
  lb.A_u_xx = magnitude(laplacian(du, g));
  lb.A_w = magnitude(dw);
  lb.A_w_x = grad_norm(dw, g);
  lb.B_u = magnitude(dp);
  lb.B_u_x = grad_norm(dp, g);
  lb.B_u_xx = magnitude(laplacian(dp, g));
  lb.B_w = magnitude(dq);
  lb.B_w_x = grad_norm(dq, g);
  lb.C_w = pointwise_max(magnitude(rec.w_n), magnitude(rec.w_np1));
  lb.C_u_x = pointwise_max(grad_norm(rec.u_n, g), grad_norm(rec.u_np1, g));
  lb.C_w_x = pointwise_max(grad_norm(rec.w_n, g), grad_norm(rec.w_np1, g));
  lb.C_u_xx = pointwise_max(magnitude(rec.lap_u_n), magnitude(rec.lap_u_np1));
  return lb;
}

bool check_smallness(const LocalBounds& lb, double tau) {
  for (std::size_t k = 0; k < lb.A_u.size(); ++k) {
    const double a = lb.A_u[k];
    if (!(a * a + tau * lb.B_u[k] < 0.25)) return false;
  }
  return true;
}

ResidualBoundFields residual_bounds(const LocalBounds& lb, double tau) {
  if (!check_smallness(lb, tau)) throw SmallnessViolated();

  const Grid2D g(lb.A_u.nodes() - 1);
  ResidualBoundFields out{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g),
                          ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
  const double tau2 = tau * tau;

  for (std::size_t k = 0; k < lb.A_u.size(); ++k) {
    const double Au = lb.A_u[k], Aux = lb.A_u_x[k], Auxx = lb.A_u_xx[k];
    const double Aw = lb.A_w[k], Awx = lb.A_w_x[k];
    const double Bu = lb.B_u[k], Bux = lb.B_u_x[k], Buxx = lb.B_u_xx[k];
    const double Bw = lb.B_w[k], Bwx = lb.B_w_x[k];
    const double Cw = lb.C_w[k], Cux = lb.C_u_x[k], Cwx = lb.C_w_x[k], Cuxx = lb.C_u_xx[k];

    const double Au2 = Au * Au;
    const double AA = Au * Aw;
    const double tBu = tau * Bu;
    const double tBux = tau * Bux;
    const double tBw = tau * Bw;
    // Bound on |∇(1 - 1/|u*|)| / 8.
    const double inv_norm_grad = Aux * Au + tBux + Cux * tBu + tau2 * Bux * Bu;
    // Bound on |1 - 1/|u*||.
    const double inv_norm_defect = (4.0 / 3.0) * Au2 + (8.0 / 3.0) * tBu;

    out.bd_ru1[k] = tBw + Cw * Au2 + Cw * tBu + 0.25 * AA;

    out.bd_grad_ru1[k] = (Cux + tBux) * (tBw + Cw * Au2) + tau * Bwx +
                         Cw * (Aux * Au + tBux + Cux * tBu + tau2 * Bu * Bux) + Au2 * Cwx + tBux * Cw +
                         tBu * Cwx + Aux * Aw + Au * Awx;

    out.bd_ru2[k] = 0.25 * AA;
    out.bd_grad_ru2[k] = 0.25 * (Aux * Aw + Au * Awx);

    out.bd_ru3[k] = (Cw + 0.25 * AA) * inv_norm_defect + 4.0 * AA * (2.0 + tBu) + 4.0 * Cw * tBu;

    out.bd_grad_ru3[k] = (Cux * Cw + Cwx + 0.25 * Aux * Aw + 0.25 * Au * Awx) * inv_norm_defect +
                         1.5 * Aux * Aw + 2.0 * Au * Cux * Aw + 1.5 * Au * Awx + (Cux * Cw + Cwx) * tBu +
                         Cw * tBux + 8.0 * (Cw + 0.25 * AA) * inv_norm_grad;

    // The trailing tau * B^u_xx majorises |Δ(u* - û)|, which the collected
    // r_w estimate omits although the intermediate r_{w,1} estimate carries it.
    out.bd_rw[k] = (Cuxx + tau * Buxx) * ((7.0 / 3.0) * Au2 + (11.0 / 3.0) * tBu) + 2.25 * Auxx * Au +
                   Aux * Aux +
                   (Cux + tBux) * 2.0 * (Aux * Au + tBux + (1.0 + Cux) * tBu + tau2 * Bux * Bu) +
                   tau * Buxx;

    const double uw = tBw + Cw * (Au2 + tBu) + AA;
    out.bd_rg[k] = (Cw + tBw) * uw + uw * uw;

    out.bd_ru[k] = out.bd_ru1[k] + out.bd_ru2[k] + out.bd_ru3[k];
    out.bd_grad_ru[k] = out.bd_grad_ru1[k] + out.bd_grad_ru2[k] + out.bd_grad_ru3[k];
  }
  return out;
}

ScalarField momentum_majorant(const LocalBounds& lb, double tau) {
  return zip(lb.C_w, lb.B_w, [tau](double c, double b) { return c + tau * b; });
}

ScalarField gradient_majorant(const LocalBounds& lb, double tau) {
  return zip(lb.C_u_x, lb.B_u_x, [tau](double c, double b) { return 2.0 * (c + tau * b); });
}

double alpha_hat(const ResidualBoundFields& rbf, const LocalBounds& lb, double tau, const Grid2D& g) {
  const ScalarField W = momentum_majorant(lb, tau);
  ScalarField combined(g);
  for (std::size_t k = 0; k < combined.size(); ++k)
    combined[k] = rbf.bd_rg[k] + rbf.bd_ru[k] * W[k] + rbf.bd_rw[k];
  return lp_norm(combined, 2.0, g) + lp_norm(rbf.bd_ru, 2.0, g) + lp_norm(rbf.bd_grad_ru, 2.0, g);
}

double delta_hat(const LocalBounds& lb, double tau, const SolverConfig& cfg, const Grid2D& g) {
  const ScalarField W = momentum_majorant(lb, tau);
  const ScalarField G = gradient_majorant(lb, tau);
  const ScalarField A = zip(G, W, [](double gv, double wv) { return gv * gv + wv * wv; });
  const double p = cfg.p_exp;
  const double two_p = std::isinf(p) ? p : 2.0 * p;
  const double w2p = lp_norm(W, two_p, g);
  const double g2p = lp_norm(G, two_p, g);
  const double inf = std::numeric_limits<double>::infinity();
  return 1.0 + cfg.c_q * lp_norm(A, p, g) + 2.0 * cfg.c_q * w2p * w2p + 2.0 * cfg.c_q * g2p * w2p +
         4.0 * lp_norm(W, inf, g);
}

EstimatorState accumulate(EstimatorState state, double int_alpha, double int_delta, double t) {
  if (!(int_alpha >= 0.0) || !(int_delta >= 0.0))
    throw std::invalid_argument("accumulate: integrals must be non-negative");
  state.bound = (state.bound + int_alpha) * std::exp(0.5 * int_delta);
  state.delta_total += int_delta;
  ++state.j;
  state.history.push_back({t, int_alpha, int_delta, state.bound});
  return state;
}

StepEstimate estimate_step(const StepRecord& rec, const SolverConfig& cfg, const Grid2D& g) {
  const LocalBounds lb = local_quantities(rec, g);
  StepEstimate est;
  est.small = check_smallness(lb, rec.tau);
  if (!est.small) return est;
  const ResidualBoundFields rbf = residual_bounds(lb, rec.tau);
  est.alpha_hat = alpha_hat(rbf, lb, rec.tau, g);
  est.delta_hat = delta_hat(lb, rec.tau, cfg, g);
  return est;
}

}  // namespace wavemap
