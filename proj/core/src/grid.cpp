#include "wavemap/grid.hpp"

#include <limits>

namespace wavemap {

double lp_norm(const ScalarField& f, double p, const Grid2D& g) {
  if (!f.matches(g)) throw std::invalid_argument("lp_norm: field does not match grid");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: exponent must be >= 1");

  CompensatedSum acc;
  const int n = g.nodes();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) acc.add(g.weight(i, j) * std::pow(std::abs(f(i, j)), p));
  const double integral = g.h() * g.h() * acc.value();
  if (p == 2.0) return std::sqrt(integral);
  return std::pow(integral, 1.0 / p);
}

double lp_norm(const VecField& f, double p, const Grid2D& g) { return lp_norm(magnitude(f), p, g); }

double inner(const VecField& a, const VecField& b, const Grid2D& g) {
  if (!a.matches(g) || !b.matches(g)) throw std::invalid_argument("inner: field does not match grid");
  CompensatedSum acc;
  const int n = g.nodes();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) acc.add(g.weight(i, j) * dot(a(i, j), b(i, j)));
  return g.h() * g.h() * acc.value();
}

double dirichlet_form(const VecField& f, const Grid2D& g) {
  if (!f.matches(g)) throw std::invalid_argument("dirichlet_form: field does not match grid");
  // Summation by parts of the mirror-ghost stencil: each x-edge of row j carries
  // the row's trapezoid weight, and h^2 * |Df|^2 = |f_{i+1} - f_i|^2.
  CompensatedSum acc;
  const int n = g.nodes();
  const int m = g.cells();
  for (int j = 0; j < n; ++j) {
    const double wj = (j == 0 || j == m) ? 0.5 : 1.0;
    for (int i = 0; i < m; ++i) acc.add(wj * norm2(f(i + 1, j) - f(i, j)));
  }
  for (int i = 0; i < n; ++i) {
    const double wi = (i == 0 || i == m) ? 0.5 : 1.0;
    for (int j = 0; j < m; ++j) acc.add(wi * norm2(f(i, j + 1) - f(i, j)));
  }
  return acc.value();
}

double max_value(const ScalarField& f) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : f.values()) m = std::max(m, v);
  return m;
}

double max_unit_defect(const VecField& u) {
  double m = 0.0;
  for (const Vec3& v : u.values()) m = std::max(m, std::abs(norm(v) - 1.0));
  return m;
}

double max_orthogonality_defect(const VecField& u, const VecField& w) {
  detail::require_same_shape(u, w);
  double m = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) m = std::max(m, std::abs(dot(u[k], w[k])));
  return m;
}

double max_difference(const VecField& a, const VecField& b) {
  detail::require_same_shape(a, b);
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, norm(a[k] - b[k]));
  return m;
}

}  // namespace wavemap
