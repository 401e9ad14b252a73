#pragma once

#include <stdexcept>
#include <string>

namespace wavemap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The midpoint fixed-point iteration hit its cap; the step size is too large.
class NonConvergence : public Error {
 public:
  explicit NonConvergence(int iterations)
      : Error("fixed-point iteration did not converge after " + std::to_string(iterations) +
              " iterations"),
        iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

/// |u*| fell below the admissible floor somewhere; the reconstruction cannot be projected.
class DegenerateNorm : public Error {
 public:
  explicit DegenerateNorm(double min_norm)
      : Error("reconstruction norm degenerated to " + std::to_string(min_norm)),
        min_norm_(min_norm) {}
  double min_norm() const { return min_norm_; }

 private:
  double min_norm_;
};

/// (A^u)^2 + tau B^u < 1/4 fails at some node.
class SmallnessViolated : public Error {
 public:
  SmallnessViolated() : Error("time step violates the residual-bound smallness condition") {}
};

/// A rejection would push the step below tau_min.
class StepFloor : public Error {
 public:
  StepFloor(double t, double tau)
      : Error("step size floor reached at t=" + std::to_string(t) + " (tau=" + std::to_string(tau) + ")"),
        t_(t),
        tau_(tau) {}
  double time() const { return t_; }
  double tau() const { return tau_; }

 private:
  double t_;
  double tau_;
};

class TimeMismatch : public Error {
 public:
  using Error::Error;
};

class NonPositiveError : public Error {
 public:
  NonPositiveError() : Error("EOC needs strictly positive errors") {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FieldFormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace wavemap
