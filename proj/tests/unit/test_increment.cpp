#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "basinctl/errors.hpp"
#include "basinctl/increment.hpp"
#include "oracles.hpp"

namespace basinctl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

IncrementProblem plain(Matrix m, Vector d, double eps0, double eps1) {
  IncrementProblem p;
  const auto n = static_cast<std::size_t>(d.size());
  p.lin = LinearizedConstraints::unconstrained(n);
  p.y0 = Vector::Zero(d.size());
  p.m_star = std::move(m);
  p.d = std::move(d);
  p.eps0 = eps0;
  p.eps1 = eps1;
  return p;
}

// Random 2-D box-only problem with a box that always contains the origin.
IncrementProblem random_box_problem(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> side(0.0, 0.06);
  Matrix m(2, 2);
  m << g(rng), g(rng), g(rng), g(rng);
  m *= 2.0;
  auto p = plain(m, Vector{{0.2 * g(rng), 0.2 * g(rng)}}, 1e-3, 5e-2);
  p.lin.bound_lo = Vector{{-side(rng), -side(rng)}};
  p.lin.bound_hi = Vector{{side(rng), side(rng)}};
  return p;
}

oracle::Grid2 grid_for(const IncrementProblem& p) {
  return {{p.m_star(0, 0), p.m_star(0, 1), p.m_star(1, 0), p.m_star(1, 1)},
          {p.d[0], p.d[1]},
          {p.lin.bound_lo[0], p.lin.bound_lo[1]},
          {p.lin.bound_hi[0], p.lin.bound_hi[1]},
          p.eps1};
}

TEST(SolveIncrement, ClippedToMaxStep) {
  const auto s = solve_increment(plain(Matrix::Identity(2, 2), Vector{{-1.0, 0.0}}, 1e-3, 0.1));
  EXPECT_EQ(s.status, IncrementStatus::ok);
  EXPECT_NEAR(s.delta[0], 0.1, 1e-12);
  EXPECT_NEAR(s.delta[1], 0.0, 1e-12);
  EXPECT_NEAR(s.forecast_residual_norm, 0.9, 1e-12);
}

TEST(SolveIncrement, FrozenDirectionStalls) {
  auto p = plain(Matrix::Identity(2, 2), Vector{{-1.0, 0.0}}, 1e-3, 0.1);
  p.lin.bound_lo[0] = 0.0;
  p.lin.bound_hi[0] = 0.0;
  const auto s = solve_increment(p);
  EXPECT_EQ(s.status, IncrementStatus::stalled);
  EXPECT_LE(s.minimizer.norm(), 1e-12);
}

TEST(SolveIncrement, ShortMinimizerIsRescaled) {
  const auto s = solve_increment(plain(Matrix::Identity(2, 2), Vector{{-0.0005, 0.0}}, 1e-3, 0.1));
  EXPECT_EQ(s.status, IncrementStatus::ok);
  EXPECT_TRUE(s.rescaled);
  EXPECT_NEAR(s.minimizer[0], 0.0005, 1e-12);
  EXPECT_NEAR(s.delta[0], 0.001, 1e-12);
  EXPECT_NEAR(s.delta[1], 0.0, 1e-15);
}

TEST(SolveIncrement, RejectsNonFinite) {
  EXPECT_THROW(solve_increment(plain(Matrix::Identity(2, 2), Vector{{std::nan(""), 0.0}}, 1e-3, 0.1)),
               NonFiniteInput);
  Matrix m = Matrix::Identity(2, 2);
  m(1, 0) = kInf;
  EXPECT_THROW(solve_increment(plain(m, Vector{{1.0, 0.0}}, 1e-3, 0.1)), NonFiniteInput);
}

TEST(SolveIncrement, RejectsBadWindow) {
  EXPECT_THROW(solve_increment(plain(Matrix::Identity(2, 2), Vector{{1.0, 0.0}}, 0.1, 0.1)),
               ValidationError);
  EXPECT_THROW(solve_increment(plain(Matrix::Identity(2, 2), Vector{{1.0, 0.0}}, 0.0, 0.1)),
               ValidationError);
}

TEST(SolveIncrement, DescentAndFeasibility) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = g(rng) * (1.0 + 5.0 * u(rng));
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d[i] = g(rng);
    auto p = plain(m, d, 1e-3, 5e-2);
    for (Eigen::Index i = 0; i < n; ++i) {
      p.lin.bound_lo[i] = -0.1 * u(rng);
      p.lin.bound_hi[i] = 0.1 * u(rng);
    }
    // One half-space through a point near the origin.
    p.lin.active_ineq_normals = Matrix(1, n);
    for (Eigen::Index i = 0; i < n; ++i) p.lin.active_ineq_normals(0, i) = g(rng);
    p.lin.active_ineq_values = Vector{{-0.01 * u(rng)}};

    const auto s = solve_increment(p);
    EXPECT_LE(s.minimizer_residual_norm, s.initial_residual_norm * (1.0 + 1e-12));
    EXPECT_NEAR(s.forecast_residual_norm, (d + m * s.delta).norm(), 1e-12);
    if (s.status != IncrementStatus::ok) continue;
    const double tol = p.lin.feas_tol;
    EXPECT_GE(s.delta.norm(), p.eps0 * (1.0 - 1e-9));
    EXPECT_LE(s.delta.norm(), p.eps1 * (1.0 + 1e-9));
    EXPECT_LE((s.delta - p.lin.bound_hi).maxCoeff(), tol);
    EXPECT_LE((p.lin.bound_lo - s.delta).maxCoeff(), tol);
    EXPECT_LE(p.lin.active_ineq_normals.row(0).dot(s.delta) + p.lin.active_ineq_values[0], tol);
    if (!s.rescaled) EXPECT_LE((m * s.delta).norm(), p.eps1 * (1.0 + 1e-9));
  }
}

TEST(SolveIncrement, EqualityRowHonoured) {
  auto p = plain(Matrix::Identity(2, 2), Vector{{-1.0, 0.0}}, 1e-3, 0.1);
  p.lin.eq_normals = Matrix(1, 2);
  p.lin.eq_normals << 1.0, -1.0;
  p.lin.eq_values = Vector{{0.0}};
  const auto s = solve_increment(p);
  ASSERT_EQ(s.status, IncrementStatus::ok);
  EXPECT_NEAR(s.delta[0], s.delta[1], 1e-9);
  EXPECT_NEAR(s.delta[0], 0.1 / std::sqrt(2.0), 1e-9);
}

TEST(SolveIncrement, MatchesGridSearch) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_box_problem(rng);
    const auto s = solve_increment(p);
    const auto grid = grid_for(p);
    EXPECT_NEAR(s.minimizer_residual_norm, grid.boundary(), 1e-6) << "trial " << trial;
    EXPECT_LE(s.minimizer_residual_norm, grid.coarse() + 1e-9) << "trial " << trial;
  }
}

TEST(SolveIncrement, OneDimensionalGridSearch) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = 3.0 * g(rng);
    const double b = 0.1 * g(rng);
    auto p = plain(Matrix::Constant(1, 1, a), Vector{{b}}, 1e-3, 5e-2);
    p.lin.bound_lo[0] = -0.03;
    p.lin.bound_hi[0] = 0.04;
    double best = std::abs(b);
    const double pitch = 5e-2 / 200.0 / 1000.0;
    for (long i = -200000; i <= 200000; ++i) {
      const double x = i * pitch;
      if (x < -0.03 || x > 0.04 || std::abs(a * x) > 5e-2) continue;
      best = std::min(best, std::abs(b + a * x));
    }
    EXPECT_NEAR(solve_increment(p).minimizer_residual_norm, best, 1e-6);
  }
}

TEST(SolveIncrement, ScaleEquivariance) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_box_problem(rng);
    const auto base = solve_increment(p);
    for (const double c : {2.0, 3.0}) {
      auto q = p;
      q.d *= c;
      q.eps0 *= c;
      q.eps1 *= c;
      q.lin.bound_lo *= c;
      q.lin.bound_hi *= c;
      const auto scaled = solve_increment(q);
      EXPECT_EQ(scaled.status, base.status);
      EXPECT_LE((scaled.delta - c * base.delta).norm(),
                1e-9 * std::max(1e-300, c * base.delta.norm()) + 1e-15)
          << "trial " << trial << " c " << c;
    }
  }
}

TEST(ImageBall, ProjectionIsNearestPoint) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a(2, 2);
    a << g(rng), g(rng), g(rng), g(rng);
    const ImageBall ball(a, 0.5);
    const Vector z{{3.0 * g(rng), 3.0 * g(rng)}};
    const Vector x = ball.project(z);
    EXPECT_LE(ball.image_norm(x), 0.5 * (1.0 + 1e-9));
    // Brute force: scan feasible points on a fine grid around the answer.
    double best = kInf;
    const int steps = 400;
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; j <= steps; ++j) {
        const Vector y = x + Vector{{(i - steps / 2) * 1e-4, (j - steps / 2) * 1e-4}};
        if ((a * y).norm() > 0.5) continue;
        best = std::min(best, (y - z).norm());
      }
    }
    EXPECT_LE((x - z).norm(), best + 1e-9);
    if (ball.contains(z)) EXPECT_EQ(x, z);
  }
}

TEST(ProjectFeasible, IdempotentOnFeasiblePoints) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_box_problem(rng);
    const Vector z{{0.3, -0.2}};
    const Vector x = project_feasible(p, z, 200);
    const Vector again = project_feasible(p, x, 200);
    EXPECT_LE((again - x).norm(), 1e-10);
  }
}

}  // namespace
}  // namespace basinctl
