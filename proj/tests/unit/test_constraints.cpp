#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "basinctl/constraints.hpp"
#include "basinctl/errors.hpp"

namespace basinctl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(ConstraintSet, UnconstrainedAcceptsAnything) {
  const ConstraintSet cs(3);
  EXPECT_TRUE(is_eligible(cs, Vector{{1e6, -1e6, 0.0}}));
  EXPECT_EQ(max_violation(cs, Vector{{1.0, 2.0, 3.0}}), 0.0);
}

TEST(ConstraintSet, FrozenComponent) {
  ConstraintSet cs(2);
  cs.freeze(0, -1.0);
  EXPECT_TRUE(is_eligible(cs, Vector{{-1.0, 5.0}}));
  EXPECT_TRUE(is_eligible(cs, Vector{{-1.0 + 5e-9, 5.0}}));
  EXPECT_FALSE(is_eligible(cs, Vector{{-0.99, 5.0}}));
}

TEST(ConstraintSet, LinearInequality) {
  ConstraintSet cs(2);
  cs.with_inequality([](const Vector& y) { return Vector{{y[0] + y[1] - 1.0}}; });
  EXPECT_TRUE(is_eligible(cs, Vector{{0.4, 0.4}}));
  EXPECT_FALSE(is_eligible(cs, Vector{{0.6, 0.6}}));
  EXPECT_NEAR(max_violation(cs, Vector{{0.6, 0.6}}), 0.2, 1e-15);
}

TEST(ConstraintSet, EqualityUsesAbsoluteValue) {
  ConstraintSet cs(2);
  cs.with_equality([](const Vector& y) { return Vector{{y[0] - y[1]}}; });
  EXPECT_TRUE(is_eligible(cs, Vector{{0.3, 0.3}}));
  EXPECT_FALSE(is_eligible(cs, Vector{{0.3, 0.4}}));
  EXPECT_FALSE(is_eligible(cs, Vector{{0.4, 0.3}}));
}

TEST(ConstraintSet, RejectsBadBounds) {
  EXPECT_THROW(ConstraintSet(Vector{{1.0}}, Vector{{0.0}}), ValidationError);
  EXPECT_THROW(ConstraintSet(Vector{{0.0, 0.0}}, Vector{{1.0}}), DimensionMismatch);
  EXPECT_THROW(ConstraintSet(Vector{{0.0}}, Vector{{1.0}}, 0.0), ValidationError);
  EXPECT_THROW(ConstraintSet(Vector{{std::nan("")}}, Vector{{1.0}}), ValidationError);
  EXPECT_NO_THROW(ConstraintSet(Vector{{-kInf}}, Vector{{kInf}}));
}

TEST(ConstraintSet, SlackIsMonotone) {
  ConstraintSet cs(Vector{{0.0, 0.0}}, Vector{{1.0, 1.0}});
  cs.with_inequality([](const Vector& y) { return Vector{{y[0] * y[0] + y[1] - 1.0}}; });
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  const double tols[] = {1e-10, 1e-6, 1e-3, 1e-1};
  for (int trial = 0; trial < 500; ++trial) {
    const Vector y{{u(rng), u(rng)}};
    bool previous = false;
    for (const double tol : tols) {
      const bool now = is_eligible(cs.with_feas_tol(tol), y);
      EXPECT_TRUE(!previous || now);
      previous = now;
    }
  }
}

TEST(Linearize, HalfOpenBox) {
  const ConstraintSet cs(Vector{{0.0, -kInf}}, Vector{{2.0, kInf}});
  const auto lin = linearize(cs, Vector{{0.5, 3.0}}, 1e-3);
  EXPECT_EQ(lin.bound_lo[0], -0.5);
  EXPECT_EQ(lin.bound_lo[1], -kInf);
  EXPECT_EQ(lin.bound_hi[0], 1.5);
  EXPECT_EQ(lin.bound_hi[1], kInf);
  EXPECT_EQ(lin.active_ineq_normals.rows() + lin.eq_normals.rows(), 0);
}

TEST(Linearize, BoxIsTranslatedExactly) {
  const ConstraintSet cs(Vector{{-1.0, 0.25, -kInf}}, Vector{{2.0, 0.75, 3.0}});
  const Vector y{{0.5, 0.5, -7.0}};
  const auto lin = linearize(cs, y, default_activation_band(cs, y));
  EXPECT_EQ(lin.bound_lo, Vector(cs.lb() - y));
  EXPECT_EQ(lin.bound_hi, Vector(cs.ub() - y));
  EXPECT_EQ(lin.bound_lo[2], -kInf);
  EXPECT_EQ(lin.active_ineq_normals.rows(), 0);
  EXPECT_EQ(lin.eq_normals.rows(), 0);
}

TEST(Linearize, NearActiveCurvedInequality) {
  ConstraintSet cs(2);
  cs.with_inequality([](const Vector& y) { return Vector{{y[0] * y[0] - 1.0}}; });
  const auto lin = linearize(cs, Vector{{0.999, 0.0}}, 0.01);
  ASSERT_EQ(lin.active_ineq_normals.rows(), 1);
  EXPECT_NEAR(lin.active_ineq_normals(0, 0), 1.998, 1e-6);
  EXPECT_NEAR(lin.active_ineq_normals(0, 1), 0.0, 1e-6);
  EXPECT_NEAR(lin.active_ineq_values[0], -0.001999, 1e-12);
}

TEST(Linearize, InactiveRowsDropped) {
  ConstraintSet cs(2);
  cs.with_inequality([](const Vector& y) { return Vector{{y[0] - 1.0, y[1] - 1.0}}; });
  const Vector y{{0.9995, 0.0}};
  const auto lin = linearize(cs, y, default_activation_band(cs, y));
  ASSERT_EQ(lin.active_ineq_normals.rows(), 1);
  EXPECT_NEAR(lin.active_ineq_normals(0, 0), 1.0, 1e-9);
  // An infinite band keeps every row.
  EXPECT_EQ(linearize(cs, y, kInf).active_ineq_normals.rows(), 2);
  EXPECT_THROW(linearize(cs, y, 0.0), ValidationError);
}

TEST(Linearize, EqualityRow) {
  ConstraintSet cs(2);
  cs.with_equality([](const Vector& y) { return Vector{{y[0] - y[1]}}; });
  const auto lin = linearize(cs, Vector{{1.0, 1.0}}, 1e-3);
  ASSERT_EQ(lin.eq_normals.rows(), 1);
  EXPECT_NEAR(lin.eq_normals(0, 0), 1.0, 1e-9);
  EXPECT_NEAR(lin.eq_normals(0, 1), -1.0, 1e-9);
  EXPECT_EQ(lin.eq_values[0], 0.0);
}

TEST(Linearize, GradientsMatchAnalytic) {
  ConstraintSet cs(3);
  cs.with_inequality([](const Vector& y) {
    return Vector{{std::sin(y[0]) * y[1] - y[2] * y[2], std::exp(0.3 * y[0]) + y[1] * y[2]}};
  });
  cs.with_equality([](const Vector& y) { return Vector{{y[0] * y[1] * y[2]}}; });
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector y{{u(rng), u(rng), u(rng)}};
    const auto lin = linearize(cs, y, kInf);
    ASSERT_EQ(lin.active_ineq_normals.rows(), 2);
    Matrix g(2, 3);
    g << std::cos(y[0]) * y[1], std::sin(y[0]), -2.0 * y[2],
        0.3 * std::exp(0.3 * y[0]), y[2], y[1];
    Matrix h(1, 3);
    h << y[1] * y[2], y[0] * y[2], y[0] * y[1];
    EXPECT_LE((lin.active_ineq_normals - g).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LE((lin.eq_normals - h).cwiseAbs().maxCoeff(), 1e-6);
  }
}

}  // namespace
}  // namespace basinctl
