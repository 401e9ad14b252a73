#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "random_records.hpp"
#include "wavemap/errors.hpp"
#include "wavemap/estimator.hpp"
#include "wavemap/reconstruct.hpp"

using namespace wavemap;

namespace {

constexpr double kKappa = fixtures::kDominanceKappa;
constexpr double kRelSlack = 1e-8;

std::vector<ScalarField*> fields_of(LocalBounds& lb) {
  return {&lb.A_u, &lb.A_u_x, &lb.A_u_xx, &lb.A_w, &lb.A_w_x, &lb.B_u,  &lb.B_u_x,
          &lb.B_u_xx, &lb.B_w, &lb.B_w_x, &lb.C_w, &lb.C_u_x, &lb.C_w_x, &lb.C_u_xx};
}

LocalBounds zero_bounds(const Grid2D& g) {
  LocalBounds lb;
  for (ScalarField* f : fields_of(lb)) *f = ScalarField(g, 0.0);
  return lb;
}

std::vector<const ScalarField*> bound_fields(const ResidualBoundFields& b) {
  return {&b.bd_ru1, &b.bd_grad_ru1, &b.bd_ru2, &b.bd_grad_ru2, &b.bd_ru3,
          &b.bd_grad_ru3, &b.bd_rw, &b.bd_rg, &b.bd_ru, &b.bd_grad_ru};
}

StepRecord static_record(const Grid2D& g) {
  std::mt19937_64 rng(99);
  const fixtures::SmoothVecFunction base(rng, 2, 0.5, {0.0, 0.0, 1.0});
  const fixtures::SmoothVecFunction mom(rng, 2, 1.0);
  SphereField u(g);
  MomentumField w(g);
  const VecField b = base.sample(g), m = mom.sample(g);
  for (std::size_t k = 0; k < u.size(); ++k) {
    u[k] = fixtures::normalized(b[k]);
    w[k] = fixtures::tangential(m[k], u[k]);
  }
  return make_record(0.0, 0.01, u, w, u, w, g);
}

struct Excess {
  double value = 0.0;
  void relative(double r, double bd) { value = std::max(value, r * (1.0 - kRelSlack) - bd); }
  void absolute(double r, double bd, double slack) { value = std::max(value, r - bd - slack); }
};

}  // namespace

TEST(LocalQuantities, TimeConstantRecord) {
  const Grid2D g(16);
  const StepRecord rec = static_record(g);
  LocalBounds lb = local_quantities(rec, g);
  for (ScalarField* f : {&lb.A_u, &lb.A_u_x, &lb.A_u_xx, &lb.A_w, &lb.A_w_x, &lb.B_u, &lb.B_u_x, &lb.B_u_xx,
                         &lb.B_w, &lb.B_w_x})
    EXPECT_EQ(max_value(*f), 0.0);
  for (std::size_t k = 0; k < lb.C_w.size(); ++k) EXPECT_EQ(lb.C_w[k], norm(rec.w_n[k]));
}

TEST(LocalQuantities, ElementaryInequalities) {
  const Grid2D g(16);
  std::mt19937_64 rng(17);
  for (int r = 0; r < 5; ++r) {
    const StepRecord rec = fixtures::random_record_spec(rng, g).build(g);
    LocalBounds lb = local_quantities(rec, g);
    for (ScalarField* f : fields_of(lb))
      for (double v : f->values()) EXPECT_GE(v, 0.0);
    for (std::size_t k = 0; k < lb.A_u.size(); ++k) {
      EXPECT_LE(lb.A_u[k], 2.0);
      EXPECT_LE(lb.B_u[k], (lb.A_u[k] * lb.C_w[k] + lb.A_w[k]) * (1 + 1e-12));
    }
  }
}

TEST(Smallness, Examples) {
  const Grid2D g(4);
  LocalBounds lb = zero_bounds(g);
  EXPECT_TRUE(check_smallness(lb, 0.1));
  lb.A_u[5] = 0.6;
  EXPECT_FALSE(check_smallness(lb, 0.1));
  lb = zero_bounds(g);
  lb.A_u = ScalarField(g, 0.2);
  lb.B_u = ScalarField(g, 2.0);
  EXPECT_TRUE(check_smallness(lb, 0.1));  // 0.04 + 0.2 < 0.25
  EXPECT_FALSE(check_smallness(lb, 0.105));
  EXPECT_THROW(residual_bounds(lb, 0.105), SmallnessViolated);
}

TEST(ResidualBounds, ZeroForTimeConstantRecord) {
  const Grid2D g(16);
  const StepRecord rec = static_record(g);
  const ResidualBoundFields b = residual_bounds(local_quantities(rec, g), rec.tau);
  for (const ScalarField* f : bound_fields(b)) EXPECT_EQ(max_value(*f), 0.0);
}

TEST(ResidualBounds, OnlyEndpointDifferences) {
  const Grid2D g(4);
  LocalBounds lb = zero_bounds(g);
  const double a = 0.3, b = 0.7;
  lb.A_u = ScalarField(g, a);
  lb.A_w = ScalarField(g, b);
  const ResidualBoundFields r = residual_bounds(lb, 0.01);
  for (std::size_t k = 0; k < r.bd_ru1.size(); ++k) {
    EXPECT_DOUBLE_EQ(r.bd_ru1[k], a * b / 4);
    EXPECT_DOUBLE_EQ(r.bd_ru2[k], a * b / 4);
    EXPECT_DOUBLE_EQ(r.bd_ru3[k], (a * b / 4) * (4.0 / 3.0) * a * a + 8 * a * b);
    EXPECT_DOUBLE_EQ(r.bd_rg[k], (a * b) * (a * b));
    EXPECT_DOUBLE_EQ(r.bd_rw[k], 0.0);
    EXPECT_DOUBLE_EQ(r.bd_ru[k], r.bd_ru1[k] + r.bd_ru2[k] + r.bd_ru3[k]);
  }
}

TEST(ResidualBounds, DominateSampledResiduals) {
  const SolverConfig cfg;
  std::mt19937_64 rng(2718);
  for (int M : {16, 32}) {
    const Grid2D g(M);
    const double slack = kKappa * g.h();
    Excess ru1, ru2, ru3, rg, rw, gru1, gru2, gru3;
    for (int r = 0; r < 20; ++r) {
      const StepRecord rec = r % 2 == 0 ? fixtures::random_record_spec(rng, g).build(g)
                                        : fixtures::random_scheme_record(rng, g, cfg);
      const LocalBounds lb = local_quantities(rec, g);
      ASSERT_TRUE(check_smallness(lb, rec.tau));
      const ResidualBoundFields bd = residual_bounds(lb, rec.tau);
      for (double t : fixtures::sample_times(rec)) {
        const ResidualSample rs = eval_residuals(rec, t, g);
        for (std::size_t k = 0; k < rs.r_u1.size(); ++k) {
          ru1.relative(norm(rs.r_u1[k]), bd.bd_ru1[k]);
          ru2.relative(norm(rs.r_u2[k]), bd.bd_ru2[k]);
          ru3.relative(norm(rs.r_u3[k]), bd.bd_ru3[k]);
          rg.relative(norm(rs.r_g[k]), bd.bd_rg[k]);
          rw.absolute(norm(rs.r_w[k]), bd.bd_rw[k], slack);
          gru1.absolute(rs.grad_r_u1[k], bd.bd_grad_ru1[k], slack);
          gru2.absolute(rs.grad_r_u2[k], bd.bd_grad_ru2[k], slack);
          gru3.absolute(rs.grad_r_u3[k], bd.bd_grad_ru3[k], slack);
        }
      }
    }
    EXPECT_LE(ru1.value, 0.0) << "M=" << M;
    EXPECT_LE(ru2.value, 0.0) << "M=" << M;
    EXPECT_LE(ru3.value, 0.0) << "M=" << M;
    EXPECT_LE(rg.value, 0.0) << "M=" << M;
    EXPECT_LE(rw.value, 0.0) << "M=" << M;
    EXPECT_LE(gru1.value, 0.0) << "M=" << M;
    EXPECT_LE(gru2.value, 0.0) << "M=" << M;
    EXPECT_LE(gru3.value, 0.0) << "M=" << M;
  }
}

// |r_u2| = |a_u| reaches its bound exactly where δu ⊥ δw.
TEST(ResidualBounds, SecondPartSharpForOrthogonalDifferences) {
  const Grid2D g(4);
  const Vec3 du{0.0, 0.1, 0.0}, dw{0.0, 0.0, 0.2};
  const StepRecord rec = make_record(0.0, 0.01, SphereField(g, {1, 0, 0}), MomentumField(g, {0, 0, 1}),
                                     SphereField(g, Vec3{1, 0, 0} + du), MomentumField(g, Vec3{0, 0, 1} + dw), g);
  const ResidualBoundFields bd = residual_bounds(local_quantities(rec, g), rec.tau);
  const ResidualSample rs = eval_residuals(rec, 0.005, g);
  for (std::size_t k = 0; k < rs.r_u2.size(); ++k) EXPECT_NEAR(norm(rs.r_u2[k]), bd.bd_ru2[k], 1e-16);
}

TEST(AlphaHat, Examples) {
  const Grid2D g(8);
  const LocalBounds lb = zero_bounds(g);
  const ResidualBoundFields zero = residual_bounds(lb, 0.1);
  EXPECT_EQ(alpha_hat(zero, lb, 0.1, g), 0.0);
  ResidualBoundFields only_rg = zero;
  only_rg.bd_rg = ScalarField(g, 0.37);
  EXPECT_NEAR(alpha_hat(only_rg, lb, 0.1, g), 0.37, 1e-15);
}

TEST(AlphaHat, CombinesPointwiseBeforeNorm) {
  const Grid2D g(8);
  LocalBounds lb = zero_bounds(g);
  lb.C_w = ScalarField(g, 2.0);
  ResidualBoundFields b = residual_bounds(lb, 0.1);
  b.bd_ru = ScalarField(g, 0.5);
  b.bd_rw = ScalarField(g, 0.25);
  b.bd_grad_ru = ScalarField(g, 1.0);
  // ||0 + 0.5*2 + 0.25|| + ||0.5|| + ||1||
  EXPECT_NEAR(alpha_hat(b, lb, 0.1, g), 1.25 + 0.5 + 1.0, 1e-14);
}

TEST(DeltaHat, Examples) {
  const Grid2D g(8);
  SolverConfig cfg;
  LocalBounds lb = zero_bounds(g);
  EXPECT_DOUBLE_EQ(delta_hat(lb, 0.1, cfg, g), 1.0);
  cfg.c_q = 1.0;
  cfg.p_exp = 4.0;
  lb.C_w = ScalarField(g, 1.0);
  EXPECT_NEAR(delta_hat(lb, 0.1, cfg, g), 8.0, 1e-14);
}

TEST(Majorants, Definitions) {
  const Grid2D g(4);
  LocalBounds lb = zero_bounds(g);
  lb.C_w = ScalarField(g, 1.0);
  lb.B_w = ScalarField(g, 3.0);
  lb.C_u_x = ScalarField(g, 2.0);
  lb.B_u_x = ScalarField(g, 5.0);
  const ScalarField W = momentum_majorant(lb, 0.1);
  const ScalarField G = gradient_majorant(lb, 0.1);
  for (double v : W.values()) EXPECT_DOUBLE_EQ(v, 1.3);
  for (double v : G.values()) EXPECT_DOUBLE_EQ(v, 5.0);
}

TEST(Estimator, MonotoneInLocalQuantities) {
  const Grid2D g(16);
  std::mt19937_64 rng(31);
  const SolverConfig cfg;
  const StepRecord rec = fixtures::random_record_spec(rng, g).build(g);
  const LocalBounds base = local_quantities(rec, g);
  const double tau = rec.tau;
  const ResidualBoundFields b0 = residual_bounds(base, tau);
  const double a0 = alpha_hat(b0, base, tau, g);
  const double d0 = delta_hat(base, tau, cfg, g);

  std::uniform_real_distribution<double> u(0.0, 0.05);
  for (std::size_t which = 0; which < 14; ++which) {
    LocalBounds lb = base;
    ScalarField& f = *fields_of(lb)[which];
    for (double& v : f.values()) v += u(rng) * (1.0 + v);
    if (!check_smallness(lb, tau)) continue;
    const ResidualBoundFields b1 = residual_bounds(lb, tau);
    const auto f0 = bound_fields(b0), f1 = bound_fields(b1);
    for (std::size_t i = 0; i < f0.size(); ++i)
      for (std::size_t k = 0; k < f0[i]->size(); ++k) EXPECT_GE((*f1[i])[k], (*f0[i])[k]) << which;
    EXPECT_GE(alpha_hat(b1, lb, tau, g), a0) << which;
    EXPECT_GE(delta_hat(lb, tau, cfg, g), d0) << which;
  }
}

// Halving the step halves A and B and quarters alpha_hat on smooth data.
TEST(Estimator, ScalesWithStepSize) {
  const Grid2D g(16);
  const SolverConfig cfg;
  std::mt19937_64 rng(8);
  const fixtures::SmoothVecFunction base(rng, 2, 0.5, {0.1, 0.2, 1.0});
  const fixtures::SmoothVecFunction mom(rng, 2, 1.0);
  SphereField u0(g);
  MomentumField w0(g);
  const VecField b = base.sample(g), m = mom.sample(g);
  for (std::size_t k = 0; k < u0.size(); ++k) {
    u0[k] = fixtures::normalized(b[k]);
    w0[k] = fixtures::tangential(m[k], u0[k]);
  }
  const double tau = 1.0 / 1024;
  StepResult full = step(u0, w0, tau, cfg, g);
  StepResult half = step(u0, w0, tau / 2, cfg, g);
  const StepRecord rf = make_record(0.0, tau, u0, w0, full.u, full.w, g);
  const StepRecord rh = make_record(0.0, tau / 2, u0, w0, half.u, half.w, g);
  const LocalBounds lf = local_quantities(rf, g), lh = local_quantities(rh, g);
  EXPECT_NEAR(lp_norm(lf.A_u, 2.0, g) / lp_norm(lh.A_u, 2.0, g), 2.0, 0.05);
  EXPECT_NEAR(lp_norm(lf.A_w, 2.0, g) / lp_norm(lh.A_w, 2.0, g), 2.0, 0.05);
  EXPECT_NEAR(lp_norm(lf.B_u, 2.0, g) / lp_norm(lh.B_u, 2.0, g), 2.0, 0.05);
  EXPECT_NEAR(lp_norm(lf.B_w, 2.0, g) / lp_norm(lh.B_w, 2.0, g), 2.0, 0.05);
  const double ratio = estimate_step(rf, cfg, g).alpha_hat / estimate_step(rh, cfg, g).alpha_hat;
  EXPECT_GT(ratio, 3.0);
  EXPECT_LT(ratio, 5.0);
}

TEST(Accumulate, Recurrence) {
  EstimatorState s;
  s = accumulate(s, 0.3, 0.4, 0.1);
  EXPECT_DOUBLE_EQ(s.bound, 0.3 * std::exp(0.2));
  s = accumulate(s, 0.5, 0.6, 0.2);
  EXPECT_NEAR(s.bound, 0.3 * std::exp(0.5) + 0.5 * std::exp(0.3), 1e-15);
  EXPECT_EQ(s.j, 2);
  EXPECT_DOUBLE_EQ(s.delta_total, 1.0);
  ASSERT_EQ(s.history.size(), 2u);
  EXPECT_EQ(s.history[1].t, 0.2);
  EXPECT_EQ(s.history[1].bound, s.bound);
}

TEST(Accumulate, PureGrowthOfInitialError) {
  EstimatorState s;
  s.bound = 0.7;
  double total = 0.0;
  for (double d : {0.1, 0.5, 0.25, 1.0}) {
    s = accumulate(s, 0.0, d);
    total += d;
  }
  EXPECT_NEAR(s.bound, 0.7 * std::exp(total / 2), 1e-15);
}

TEST(Accumulate, NondecreasingAndOrderInvariantForEqualSteps) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 0.1);
  EstimatorState s;
  double prev = 0.0;
  for (int j = 0; j < 50; ++j) {
    s = accumulate(s, u(rng), u(rng));
    EXPECT_GE(s.bound, prev);
    prev = s.bound;
  }
  EstimatorState a, b;
  std::vector<int> order(20);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int j = 0; j < 20; ++j) a = accumulate(a, 0.01, 0.2, j);
  for (int j : order) b = accumulate(b, 0.01, 0.2, j);
  EXPECT_EQ(a.bound, b.bound);
}

TEST(Accumulate, RejectsNegativeIntegrals) {
  EXPECT_THROW(accumulate({}, -1e-300, 0.0), std::invalid_argument);
  EXPECT_THROW(accumulate({}, 0.0, -1.0), std::invalid_argument);
  EXPECT_THROW(accumulate({}, NAN, 0.0), std::invalid_argument);
}

TEST(EstimateStep, ReportsSmallnessFailure) {
  const Grid2D g(8);
  const StepRecord rec = make_record(0.0, 0.1, SphereField(g, {1, 0, 0}), MomentumField(g),
                                     SphereField(g, {0, 1, 0}), MomentumField(g), g);
  const StepEstimate est = estimate_step(rec, SolverConfig{}, g);
  EXPECT_FALSE(est.small);
}
