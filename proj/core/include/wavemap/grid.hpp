#pragma once

// Node-centred finite-difference grid on the square (-1/2, 1/2)^2 with
// homogeneous Neumann boundaries realised through mirror ghost nodes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wavemap/vec3.hpp"

namespace wavemap {

class Grid2D {
 public:
  /// `cells` is the number of cells per axis (M); nodes sit at -1/2 + i/M.
  explicit Grid2D(int cells) : cells_(cells), h_(1.0 / cells) {
    if (cells < 2) throw std::invalid_argument("Grid2D: need at least 2 cells per axis");
  }

  int cells() const { return cells_; }
  int nodes() const { return cells_ + 1; }
  std::size_t size() const {
    return static_cast<std::size_t>(nodes()) * static_cast<std::size_t>(nodes());
  }
  double h() const { return h_; }
  double coord(int i) const { return -0.5 + i * h_; }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nodes()) +
           static_cast<std::size_t>(i);
  }

  /// Maps a ghost index (-1 or M+1) onto its mirror image.
  int mirror(int i) const {
    if (i < 0) return -i;
    if (i > cells_) return 2 * cells_ - i;
    return i;
  }

  /// Trapezoidal weight of node (i, j): 1 inside, 1/2 on edges, 1/4 at corners.
  double weight(int i, int j) const { return axis_weight(i) * axis_weight(j); }

  friend bool operator==(const Grid2D& a, const Grid2D& b) { return a.cells_ == b.cells_; }

 private:
  double axis_weight(int i) const { return (i == 0 || i == cells_) ? 0.5 : 1.0; }

  int cells_;
  double h_;
};

template <class T>
class Field {
 public:
  Field() = default;
  explicit Field(const Grid2D& g, const T& fill = T{}) : nodes_(g.nodes()), data_(g.size(), fill) {}

  int nodes() const { return nodes_; }
  std::size_t size() const { return data_.size(); }
  bool matches(const Grid2D& g) const { return nodes_ == g.nodes(); }

  T& operator()(int i, int j) { return data_[flat(i, j)]; }
  const T& operator()(int i, int j) const { return data_[flat(i, j)]; }
  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::size_t flat(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nodes_) +
           static_cast<std::size_t>(i);
  }

  int nodes_ = 0;
  std::vector<T> data_;
};

using VecField = Field<Vec3>;
using ScalarField = Field<double>;
// Unit 3-vectors at every node (the discrete map u^n).
using SphereField = VecField;
// 3-vectors orthogonal to the paired SphereField (the angular momentum).
using MomentumField = VecField;

/// Neumaier-compensated accumulator; used for every reduction over the grid.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {
inline double sq(double v) { return v * v; }
inline double sq(const Vec3& v) { return norm2(v); }

template <class A, class B>
void require_same_shape(const Field<A>& a, const Field<B>& b) {
  if (a.nodes() != b.nodes()) throw std::invalid_argument("field shapes differ");
}
}  // namespace detail

/// Builds a field by sampling `fn(x, y)` at every node.
template <class Fn>
auto sample(const Grid2D& g, Fn&& fn) {
  using T = std::decay_t<decltype(fn(0.0, 0.0))>;
  Field<T> out(g);
  for (int j = 0; j < g.nodes(); ++j)
    for (int i = 0; i < g.nodes(); ++i) out(i, j) = fn(g.coord(i), g.coord(j));
  return out;
}

/// Pointwise combination of two fields of equal shape.
template <class A, class B, class Fn>
auto zip(const Field<A>& a, const Field<B>& b, Fn&& fn) {
  detail::require_same_shape(a, b);
  using T = std::decay_t<decltype(fn(a[0], b[0]))>;
  Field<T> out(Grid2D(a.nodes() - 1));
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = fn(a[k], b[k]);
  return out;
}

/// Pointwise map of a single field.
template <class A, class Fn>
auto map(const Field<A>& a, Fn&& fn) {
  using T = std::decay_t<decltype(fn(a[0]))>;
  Field<T> out(Grid2D(a.nodes() - 1));
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = fn(a[k]);
  return out;
}

template <class T>
Field<T> operator+(const Field<T>& a, const Field<T>& b) {
  return zip(a, b, [](const T& x, const T& y) { return x + y; });
}
template <class T>
Field<T> operator-(const Field<T>& a, const Field<T>& b) {
  return zip(a, b, [](const T& x, const T& y) { return x - y; });
}
template <class T>
Field<T> operator*(double s, const Field<T>& a) {
  return map(a, [s](const T& x) { return s * x; });
}

/// y + alpha * x
template <class T>
Field<T> axpy(double alpha, const Field<T>& x, const Field<T>& y) {
  return zip(x, y, [alpha](const T& a, const T& b) { return b + alpha * a; });
}

inline VecField cross(const VecField& a, const VecField& b) {
  return zip(a, b, [](const Vec3& x, const Vec3& y) { return cross(x, y); });
}
inline ScalarField dot(const VecField& a, const VecField& b) {
  return zip(a, b, [](const Vec3& x, const Vec3& y) { return dot(x, y); });
}
inline ScalarField magnitude(const VecField& a) {
  return map(a, [](const Vec3& x) { return norm(x); });
}

/// 5-point Laplacian with mirror ghosts (f_{-1,j} := f_{1,j}, ...).
template <class T>
Field<T> laplacian(const Field<T>& f, const Grid2D& g) {
  if (!f.matches(g)) throw std::invalid_argument("laplacian: field does not match grid");
  const int n = g.nodes();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  Field<T> out(g);
  for (int j = 0; j < n; ++j) {
    const int jm = g.mirror(j - 1);
    const int jp = g.mirror(j + 1);
    for (int i = 0; i < n; ++i) {
      const int im = g.mirror(i - 1);
      const int ip = g.mirror(i + 1);
      const T& c = f(i, j);
      // Differences first so that constants are annihilated exactly.
      T acc = (f(ip, j) - c) + (f(im, j) - c);
      acc = acc + ((f(i, jp) - c) + (f(i, jm) - c));
      out(i, j) = acc * inv_h2;
    }
  }
  return out;
}

/// Centred first differences along x and y (zero on the boundary by mirroring).
template <class T>
std::pair<Field<T>, Field<T>> gradient(const Field<T>& f, const Grid2D& g) {
  if (!f.matches(g)) throw std::invalid_argument("gradient: field does not match grid");
  const int n = g.nodes();
  const double inv_2h = 0.5 / g.h();
  Field<T> dx(g);
  Field<T> dy(g);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      dx(i, j) = (f(g.mirror(i + 1), j) - f(g.mirror(i - 1), j)) * inv_2h;
      dy(i, j) = (f(i, g.mirror(j + 1)) - f(i, g.mirror(j - 1))) * inv_2h;
    }
  }
  return {std::move(dx), std::move(dy)};
}

/// |∇f|^2 per node, summed over both axes and all components.
template <class T>
ScalarField gradient_sq(const Field<T>& f, const Grid2D& g) {
  auto [dx, dy] = gradient(f, g);
  ScalarField out(g);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = detail::sq(dx[k]) + detail::sq(dy[k]);
  return out;
}

/// Pointwise |∇f| (Frobenius norm of the centred-difference Jacobian).
template <class T>
ScalarField grad_norm(const Field<T>& f, const Grid2D& g) {
  ScalarField out = gradient_sq(f, g);
  for (double& v : out.values()) v = std::sqrt(v);
  return out;
}

/// Discrete L^p norm with trapezoidal weights; p = infinity gives the node maximum.
double lp_norm(const ScalarField& f, double p, const Grid2D& g);
double lp_norm(const VecField& f, double p, const Grid2D& g);

/// Trapezoid-weighted L^2 inner product.
double inner(const VecField& a, const VecField& b, const Grid2D& g);

/// -<Δ_h f, f> evaluated as the weighted sum of squared edge differences.
/// This is the Dirichlet form the midpoint scheme conserves.
double dirichlet_form(const VecField& f, const Grid2D& g);

double max_value(const ScalarField& f);

/// max over nodes of | |u| - 1 |.
double max_unit_defect(const VecField& u);
/// max over nodes of |u . w|.
double max_orthogonality_defect(const VecField& u, const VecField& w);
/// max over nodes of |a - b|.
double max_difference(const VecField& a, const VecField& b);

}  // namespace wavemap
