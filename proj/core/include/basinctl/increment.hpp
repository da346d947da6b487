#pragma once

#include <cstddef>

#include "basinctl/constraints.hpp"

namespace basinctl {

/// Per-iteration subproblem: find delta minimizing ||d + M delta|| over the
/// linearized eligible region with eps0 <= ||delta|| <= eps1 and
/// ||M delta|| <= eps1.
struct IncrementProblem {
  Vector d;       ///< y(t*) - yt
  Matrix m_star;  ///< M(t*)
  Vector y0;      ///< current candidate, for reference only
  LinearizedConstraints lin;
  double eps0 = 1e-3;
  double eps1 = 5e-2;
};

enum class IncrementStatus { ok, stalled };

struct IncrementSolution {
  Vector delta;
  double forecast_residual_norm = 0.0;  ///< ||d + M delta|| for the returned delta
  IncrementStatus status = IncrementStatus::stalled;

  // Solver telemetry.
  double initial_residual_norm = 0.0;   ///< ||d||
  double minimizer_residual_norm = 0.0; ///< ||d + M delta*|| before eps0 rescale
  Vector minimizer;                     ///< delta* before eps0 rescale
  bool rescaled = false;
  int iterations = 0;
};

struct IncrementOptions {
  int power_iterations = 50;
  int projection_rounds = 2000;  ///< cap; Dykstra stops early once converged
  int max_iterations = 500;
  double step_tol = 1e-12;
  bool accelerate = true;  ///< Nesterov momentum with adaptive restart
};

/// Accelerated projected gradient on 0.5 ||d + M delta||^2 with step
/// 1/sigma_max(M)^2, starting at delta = 0. Projections onto the intersection
/// of the box, the linearized rows and both norm balls use Dykstra's cyclic
/// scheme in the fixed order box, inequalities, equalities, ||delta|| ball,
/// ||M delta|| ball.
///
/// When the minimizer is shorter than eps0 it is rescaled to length eps0 and
/// reprojected without the ||M delta|| cap, so the minimum step wins over the
/// image cap near strongly expanding flows.
///
/// Throws NonFiniteInput if d or M contain NaN/Inf, ValidationError when the
/// step window is not 0 < eps0 < eps1 or dimensions disagree.
IncrementSolution solve_increment(const IncrementProblem& p, const IncrementOptions& opts = {});

/// Feasible-set projection used by the solver, exposed for testing.
/// `include_balls` toggles the two norm caps.
Vector project_feasible(const IncrementProblem& p, const Vector& z, int rounds,
                        bool include_balls = true);

/// Euclidean projection onto the ellipsoid {x : ||A x|| <= radius}.
///
/// Precomputes the eigendecomposition of A^T A; each projection is then a
/// scalar root-find for the multiplier in x = (I + mu A^T A)^{-1} z.
class ImageBall {
 public:
  ImageBall(const Matrix& a, double radius);

  bool contains(const Vector& z, double rel_slack = 0.0) const;
  Vector project(const Vector& z) const;
  double image_norm(const Vector& z) const;

 private:
  Matrix a_;
  Matrix basis_;      // eigenvectors of A^T A
  Vector spectrum_;   // eigenvalues of A^T A, clamped at 0
  double radius_;
};

}  // namespace basinctl
