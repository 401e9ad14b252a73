#include "wavemap/scheme.hpp"

#include <cmath>
#include <stdexcept>

#include "wavemap/errors.hpp"

namespace wavemap {

void SolverConfig::validate() const {
  if (!(fp_tol > 0.0)) throw std::invalid_argument("fp_tol must be positive");
  if (fp_max_iter < 1) throw std::invalid_argument("fp_max_iter must be at least 1");
  if (!(unit_tol > 0.0)) throw std::invalid_argument("unit_tol must be positive");
  if (!(c_q > 0.0)) throw std::invalid_argument("c_q must be positive");
  if (!(p_exp > 2.0)) throw std::invalid_argument("p_exp must exceed 2");
}

StepRecord make_record(double t_n, double tau, SphereField u_n, MomentumField w_n, SphereField u_np1,
                       MomentumField w_np1, const Grid2D& g, const VecField* lap_u_n) {
  if (!(tau > 0.0)) throw std::invalid_argument("make_record: tau must be positive");
  StepRecord rec;
  rec.t_n = t_n;
  rec.tau = tau;
  rec.t_np1 = t_n + tau;
  rec.lap_u_n = lap_u_n != nullptr ? *lap_u_n : laplacian(u_n, g);
  rec.lap_u_np1 = laplacian(u_np1, g);
  rec.u_n = std::move(u_n);
  rec.w_n = std::move(w_n);
  rec.u_np1 = std::move(u_np1);
  rec.w_np1 = std::move(w_np1);
  return rec;
}

StepResult step(const SphereField& u_n, const MomentumField& w_n, double tau, const SolverConfig& cfg,
                const Grid2D& g) {
  if (!u_n.matches(g) || !w_n.matches(g)) throw std::invalid_argument("step: field does not match grid");
  if (!(tau > 0.0)) throw std::invalid_argument("step: tau must be positive");

  SphereField u = u_n;
  MomentumField w = w_n;
  SphereField u_next(g);
  MomentumField w_next(g);
  VecField mid_u(g);
  VecField mid_w(g);
  const std::size_t n = u.size();

  for (int iter = 1; iter <= cfg.fp_max_iter; ++iter) {
    for (std::size_t k = 0; k < n; ++k) {
      mid_u[k] = 0.5 * (u_n[k] + u[k]);
      mid_w[k] = 0.5 * (w_n[k] + w[k]);
    }
    const VecField lap = laplacian(mid_u, g);

    double change = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      u_next[k] = u_n[k] + tau * cross(mid_u[k], mid_w[k]);
      w_next[k] = w_n[k] + tau * cross(lap[k], mid_u[k]);
      change = std::max({change, norm(u_next[k] - u[k]), norm(w_next[k] - w[k])});
    }
    std::swap(u, u_next);
    std::swap(w, w_next);

    if (!std::isfinite(change)) throw NonConvergence(iter);
    if (change <= cfg.fp_tol) return {std::move(u), std::move(w), iter};
  }
  throw NonConvergence(cfg.fp_max_iter);
}

std::pair<SphereField, MomentumField> initial_data(const Grid2D& g) {
  SphereField u = sample(g, [](double x1, double x2) -> Vec3 {
    const double r2 = x1 * x1 + x2 * x2;
    const double r = std::sqrt(r2);
    if (r >= 0.5) return {0.0, 0.0, -1.0};
    const double a = std::pow(1.0 - 2.0 * r, 4);
    const double den = a * a + r2;
    return {2.0 * a * x1 / den, 2.0 * a * x2 / den, (a * a - r2) / den};
  });
  return {std::move(u), MomentumField(g)};
}

std::pair<SphereField, MomentumField> constant_data(const Grid2D& g, Vec3 u0) {
  const double len = norm(u0);
  if (!(len > 0.0)) throw std::invalid_argument("constant_data: zero direction");
  return {SphereField(g, u0 / len), MomentumField(g)};
}

std::pair<SphereField, MomentumField> rotation_data(const Grid2D& g, Vec3 u0, Vec3 w0) {
  const double len = norm(u0);
  if (!(len > 0.0)) throw std::invalid_argument("rotation_data: zero direction");
  u0 = u0 / len;
  w0 = w0 - dot(w0, u0) * u0;
  return {SphereField(g, u0), MomentumField(g, w0)};
}

double energy(const SphereField& u, const MomentumField& w, const Grid2D& g) {
  const double kinetic = inner(w, w, g);
  return 0.5 * (kinetic + dirichlet_form(u, g));
}

Vec3 cayley_step(const Vec3& u, const Vec3& w, double tau) {
  const double speed = norm(w);
  if (speed == 0.0) return u;
  const Vec3 axis = -(w / speed);
  const double angle = 2.0 * std::atan(0.5 * tau * speed);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return c * u + s * cross(axis, u) + (1.0 - c) * dot(axis, u) * axis;
}

}  // namespace wavemap
