#include "basinctl/increment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "basinctl/errors.hpp"

namespace basinctl {

namespace {

constexpr int kPolishRounds = 1000;

// Largest eigenvalue of M^T M by power iteration from a fixed start vector.
double top_singular_value_squared(const Matrix& m, int iterations) {
  const Eigen::Index n = m.cols();
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + static_cast<double>(i) / static_cast<double>(n);
  v.normalize();
  double estimate = 0.0;
  for (int k = 0; k < iterations; ++k) {
    Vector w = m.transpose() * (m * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    estimate = v.dot(w);
    v = w / norm;
  }
  return std::max(estimate, (m * v).squaredNorm());
}

/// One convex piece of the feasible region.
struct Piece {
  enum class Kind { box, halfspace, hyperplane, ball, image_ball } kind;
  Eigen::Index row = 0;
};

class FeasibleRegion {
 public:
  FeasibleRegion(const IncrementProblem& p, bool norm_ball, bool image_ball)
      : p_(p), image_ball_(image_ball ? ImageBall(p.m_star, p.eps1) : ImageBall(Matrix(), 0)) {
    pieces_.push_back({Piece::Kind::box});
    for (Eigen::Index a = 0; a < p.lin.active_ineq_values.size(); ++a) {
      pieces_.push_back({Piece::Kind::halfspace, a});
    }
    for (Eigen::Index b = 0; b < p.lin.eq_values.size(); ++b) {
      pieces_.push_back({Piece::Kind::hyperplane, b});
    }
    if (norm_ball) pieces_.push_back({Piece::Kind::ball});
    if (image_ball) pieces_.push_back({Piece::Kind::image_ball});
  }

  Vector project_piece(const Piece& piece, const Vector& z) const {
    switch (piece.kind) {
      case Piece::Kind::box:
        return z.cwiseMax(p_.lin.bound_lo).cwiseMin(p_.lin.bound_hi);
      case Piece::Kind::halfspace: {
        const auto a = p_.lin.active_ineq_normals.row(piece.row).transpose();
        const double bound = -p_.lin.active_ineq_values[piece.row];
        const double excess = a.dot(z) - bound;
        const double aa = a.squaredNorm();
        if (excess <= 0.0 || aa == 0.0) return z;
        return z - (excess / aa) * a;
      }
      case Piece::Kind::hyperplane: {
        const auto a = p_.lin.eq_normals.row(piece.row).transpose();
        const double target = -p_.lin.eq_values[piece.row];
        const double aa = a.squaredNorm();
        if (aa == 0.0) return z;
        return z - ((a.dot(z) - target) / aa) * a;
      }
      case Piece::Kind::ball: {
        const double norm = z.norm();
        if (norm <= p_.eps1) return z;
        return z * (p_.eps1 / norm);
      }
      case Piece::Kind::image_ball:
        return image_ball_.project(z);
    }
    return z;
  }

  // Dykstra's alternating projections: converges to the projection onto the
  // intersection, not just to some point inside it.
  Vector project(const Vector& z, int rounds) const {
    Vector x = z;
    std::vector<Vector> corrections(pieces_.size(), Vector::Zero(z.size()));
    const double tol = 1e-14 * std::max(p_.eps1, z.norm());
    for (int r = 0; r < rounds; ++r) {
      const Vector start = x;
      double correction_change = 0.0;
      for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const Vector shifted = x + corrections[i];
        Vector next = project_piece(pieces_[i], shifted);
        Vector new_corr = shifted - next;
        correction_change += (new_corr - corrections[i]).squaredNorm();
        corrections[i] = std::move(new_corr);
        x = std::move(next);
      }
      if ((x - start).norm() <= tol && std::sqrt(correction_change) <= tol) break;
    }
    return x;
  }

  /// Largest violation of the box and linearized rows.
  double linear_violation(const Vector& z) const {
    double worst = std::max((p_.lin.bound_lo - z).maxCoeff(), (z - p_.lin.bound_hi).maxCoeff());
    if (p_.lin.active_ineq_values.size() > 0) {
      worst = std::max(worst, (p_.lin.active_ineq_normals * z + p_.lin.active_ineq_values).maxCoeff());
    }
    if (p_.lin.eq_values.size() > 0) {
      worst = std::max(worst,
                       (p_.lin.eq_normals * z + p_.lin.eq_values).cwiseAbs().maxCoeff());
    }
    return std::max(worst, 0.0);
  }

  /// Plain cyclic projections onto the linear pieces only. Dykstra can stop
  /// short of the intersection when the image ball meets a row at a shallow
  /// angle; this pulls the point back inside without moving it far, and ends
  /// on an exact box clamp.
  Vector polish(const Vector& z, int rounds) const {
    Vector x = z;
    const double target = 1e-3 * p_.lin.feas_tol;
    for (int r = 0; r < rounds && linear_violation(x) > target; ++r) {
      for (const auto& piece : pieces_) {
        if (piece.kind == Piece::Kind::ball || piece.kind == Piece::Kind::image_ball) continue;
        x = project_piece(piece, x);
      }
    }
    // Frozen components must come out exact.
    return x.cwiseMax(p_.lin.bound_lo).cwiseMin(p_.lin.bound_hi);
  }

 private:
  const IncrementProblem& p_;
  ImageBall image_ball_;
  std::vector<Piece> pieces_;
};

// Pulls delta back inside both norm caps by uniform shrinking.
Vector enforce_caps(const Vector& delta, const Matrix& m, double eps1) {
  const double norm = delta.norm();
  const double image = (m * delta).norm();
  double scale = 1.0;
  if (norm > eps1) scale = std::min(scale, eps1 / norm);
  if (image > eps1) scale = std::min(scale, eps1 / image);
  return scale < 1.0 ? Vector(delta * scale) : delta;
}

void check_problem(const IncrementProblem& p) {
  const Eigen::Index n = p.d.size();
  if (n == 0 || p.m_star.rows() != n || p.m_star.cols() != n) {
    throw ValidationError("increment problem: M must be n x n with n = len(d)");
  }
  if (p.lin.bound_lo.size() != n || p.lin.bound_hi.size() != n ||
      p.lin.active_ineq_normals.rows() != p.lin.active_ineq_values.size() ||
      p.lin.eq_normals.rows() != p.lin.eq_values.size() ||
      (p.lin.active_ineq_normals.rows() > 0 && p.lin.active_ineq_normals.cols() != n) ||
      (p.lin.eq_normals.rows() > 0 && p.lin.eq_normals.cols() != n)) {
    throw DimensionMismatch("increment problem: linearized constraints do not match dimension");
  }
  if (!p.d.allFinite() || !p.m_star.allFinite()) {
    throw NonFiniteInput("increment problem: d or M contains NaN/Inf");
  }
  if (!(p.eps0 > 0.0) || !(p.eps1 > p.eps0) || !std::isfinite(p.eps1)) {
    throw ValidationError("increment problem: need 0 < eps0 < eps1");
  }
}

}  // namespace

ImageBall::ImageBall(const Matrix& a, double radius) : a_(a), radius_(radius) {
  if (a.size() == 0) return;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a.transpose() * a);
  basis_ = eig.eigenvectors();
  spectrum_ = eig.eigenvalues().cwiseMax(0.0);
}

double ImageBall::image_norm(const Vector& z) const { return (a_ * z).norm(); }

bool ImageBall::contains(const Vector& z, double rel_slack) const {
  return image_norm(z) <= radius_ * (1.0 + rel_slack);
}

Vector ImageBall::project(const Vector& z) const {
  if (contains(z)) return z;
  const Vector w = basis_.transpose() * z;
  const Vector w2 = w.cwiseAbs2();
  const double r2 = radius_ * radius_;
  // phi(mu) = sum s_i w_i^2 / (1 + mu s_i)^2 decreases from phi(0) > r^2 to 0.
  auto phi = [&](double mu) {
    return (spectrum_.array() * w2.array() / (1.0 + mu * spectrum_.array()).square()).sum();
  };
  double lo = 0.0;
  double hi = 1.0 / std::max(spectrum_.maxCoeff(), std::numeric_limits<double>::min());
  while (phi(hi) > r2 && hi < 1e300) {
    lo = hi;
    hi *= 4.0;
  }
  // Newton on 1/sqrt(phi) - 1/r (close to linear in mu), bisection fallback.
  double mu = hi;
  for (int it = 0; it < 200; ++it) {
    const double f = phi(mu);
    if (std::abs(std::sqrt(f) - radius_) <= 1e-15 * radius_) break;
    if (f > r2) lo = mu; else hi = mu;
    const double dphi = (-2.0 * spectrum_.array().square() * w2.array() /
                         (1.0 + mu * spectrum_.array()).cube()).sum();
    // d/dmu phi^{-1/2} = -0.5 phi^{-3/2} phi'
    const double g = 1.0 / std::sqrt(f) - 1.0 / radius_;
    const double dg = -0.5 * std::pow(f, -1.5) * dphi;
    double next = dg != 0.0 ? mu - g / dg : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-16 * hi) break;
    mu = next;
  }
  Vector x = basis_ * (w.array() / (1.0 + mu * spectrum_.array())).matrix();
  // Round-off can leave the image a hair outside; shrink onto the boundary.
  const double image = image_norm(x);
  if (image > radius_) x *= radius_ / image;
  return x;
}

Vector project_feasible(const IncrementProblem& p, const Vector& z, int rounds,
                        bool include_balls) {
  const FeasibleRegion region(p, include_balls, include_balls);
  return region.project(z, rounds);
}

IncrementSolution solve_increment(const IncrementProblem& p, const IncrementOptions& opts) {
  check_problem(p);
  const Matrix& m = p.m_star;
  const FeasibleRegion region(p, true, true);
  const double tiny = 1e-12 * p.eps0;

  IncrementSolution sol;
  sol.initial_residual_norm = p.d.norm();

  // Projected gradient on 0.5 ||d + M delta||^2; the gradient is
  // M^T (d + M delta) with Lipschitz constant sigma_max(M)^2. Momentum
  // (restarted whenever it points uphill) keeps ill-conditioned M from
  // exhausting the iteration cap.
  const double lipschitz = top_singular_value_squared(m, opts.power_iterations);
  Vector delta = Vector::Zero(p.d.size());
  if (lipschitz > 0.0) {
    const double step = 1.0 / lipschitz;
    Vector lookahead = delta;
    double momentum = 1.0;
    for (int it = 0; it < opts.max_iterations; ++it) {
      const Vector grad = m.transpose() * (p.d + m * lookahead);
      Vector next = region.project(lookahead - step * grad, opts.projection_rounds);
      const Vector move = next - delta;
      const double change = move.norm();
      sol.iterations = it + 1;
      if (opts.accelerate && (lookahead - next).dot(move) <= 0.0) {
        const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
        lookahead = next + ((momentum - 1.0) / next_momentum) * move;
        momentum = next_momentum;
      } else {
        lookahead = next;
        momentum = 1.0;
      }
      delta = std::move(next);
      if (change < opts.step_tol) break;
    }
  }
  delta = region.polish(delta, kPolishRounds);
  delta = enforce_caps(delta, m, p.eps1);
  if ((p.d + m * delta).norm() > sol.initial_residual_norm) delta.setZero();

  sol.minimizer = delta;
  sol.minimizer_residual_norm = (p.d + m * delta).norm();

  const double size = delta.norm();
  if (size <= tiny) {
    sol.delta = delta;
    sol.forecast_residual_norm = sol.minimizer_residual_norm;
    sol.status = IncrementStatus::stalled;
    return sol;
  }

  const double min_size = p.eps0 * (1.0 - 1e-9);
  if (size < p.eps0) {
    // Enforce the minimum step along delta*, then return to the feasible
    // set. Alternate a few times; give up below eps0/2. The minimum step
    // takes precedence over the ||M delta|| cap, which is dropped here.
    const FeasibleRegion relaxed(p, true, false);
    sol.rescaled = true;
    for (int round = 0; round < 20; ++round) {
      delta *= p.eps0 / delta.norm();
      delta = relaxed.project(delta, opts.projection_rounds);
      delta = relaxed.polish(delta, kPolishRounds);
      if (delta.norm() > p.eps1) delta *= p.eps1 / delta.norm();
      const double norm = delta.norm();
      if (norm < 0.5 * p.eps0 || norm >= min_size) break;
    }
    if (delta.norm() < min_size) {
      sol.delta = delta;
      sol.forecast_residual_norm = (p.d + m * delta).norm();
      sol.status = IncrementStatus::stalled;
      return sol;
    }
  }

  sol.delta = std::move(delta);
  sol.forecast_residual_norm = (p.d + m * sol.delta).norm();
  sol.status = IncrementStatus::ok;
  return sol;
}

}  // namespace basinctl
