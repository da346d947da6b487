#include "basinctl/controller.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "basinctl/errors.hpp"

namespace basinctl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Number of rounds for the post-step eligibility repair on curved g/h.
constexpr int kRepairRounds = 10;

/// Forecast problem at grid index k of a variational run, in the metric's
/// local coordinates.
IncrementProblem forecast_problem(const VariationalResult& var, std::size_t k, const Vector& yt,
                                  const Vector& candidate, LinearizedConstraints lin,
                                  const ControlParams& params) {
  IncrementProblem p;
  p.d = var.trajectory.states[k] - yt;
  p.m_star = var.matrices[k];
  const Vector w = params.metric.sqrt_weights();
  if (w.size() > 0) {
    p.d = w.asDiagonal() * p.d;
    p.m_star = w.asDiagonal() * p.m_star;
  }
  p.y0 = candidate;
  p.lin = std::move(lin);
  p.eps0 = params.eps0;
  p.eps1 = params.eps1;
  return p;
}

bool step_in_window(double size, const ControlParams& params) {
  return size >= params.eps0 * (1.0 - 1e-9) && size <= params.eps1 * (1.0 + 1e-9);
}

}  // namespace

void ControlParams::validate() const {
  auto fail = [](const std::string& msg) { throw ValidationError("control params: " + msg); };
  if (!(eps0 > 0.0)) fail("eps0 must be positive");
  if (!(eps1 > eps0)) fail("eps1 must exceed eps0");
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt must be positive");
  if (!(t_max >= dt) || !std::isfinite(t_max)) fail("t_max must be >= dt");
  if (!(t_test >= t_max) || !std::isfinite(t_test)) fail("t_test must be >= t_max");
  if (!(tol > 0.0)) fail("tol must be positive");
  if (n_test < 1) fail("n_test must be >= 1");
  if (it_max < 0) fail("it_max must be >= 0");
  if (!std::isfinite(eps1)) fail("eps1 must be finite");
}

ClosestApproach find_closest_approach(const Trajectory& traj, const Vector& yt,
                                      const Metric& metric) {
  if (traj.states.empty()) throw ValidationError("closest approach on an empty trajectory");
  ClosestApproach best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const double dist = metric(traj.states[k], yt);
    if (dist < best.distance) {
      best = {k, traj.times[k], dist};
    }
  }
  return best;
}

ConvergenceVerdict test_convergence_verdict(const DynamicalSystem& system, const Vector& y0,
                                            const Vector& yt, const ControlParams& params) {
  if (y0.size() != yt.size() || static_cast<std::size_t>(y0.size()) != system.dimension) {
    throw DimensionMismatch("convergence test: state sizes do not match the system");
  }
  ConvergenceVerdict verdict;
  const std::vector<double> times = time_grid(params.dt, params.t_test);
  Vector y = y0;
  Rk4Stepper stepper(system);
  verdict.min_distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (k > 0) {
      stepper.step(y, times[k] - times[k - 1]);
      if (!y.allFinite()) {
        verdict.non_finite = true;
        return verdict;
      }
    }
    const double dist = params.metric(y, yt);
    verdict.min_distance = std::min(verdict.min_distance, dist);
    if (dist <= params.tol) {
      verdict.converged = true;
      verdict.time = times[k];
      return verdict;
    }
  }
  return verdict;
}

bool test_convergence(const DynamicalSystem& system, const Vector& y0, const Vector& yt,
                      const ControlParams& params) {
  return test_convergence_verdict(system, y0, yt, params).converged;
}

ControlOutcome control(const DynamicalSystem& system, const Vector& y0, const Vector& yt,
                       const ConstraintSet& cs, const ControlParams& params,
                       const IncrementOptions& solver) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(system.dimension);
  if (y0.size() != n || yt.size() != n || cs.dimension() != system.dimension) {
    throw DimensionMismatch("control: y0, yt and constraints must match the system dimension");
  }
  if (!y0.allFinite() || !yt.allFinite()) throw NonFiniteInput("control: y0 and yt must be finite");
  if (!is_eligible(cs, y0)) {
    throw IneligibleStart("control: initial state violates the constraints (max violation " +
                          std::to_string(max_violation(cs, y0)) + ")");
  }

  const auto run_start = Clock::now();
  ControlOutcome out;
  out.iterates.push_back(y0);
  Vector candidate = y0;

  for (int iter = 0;; ++iter) {
    double t_int = 0.0;
    // Test on schedule, and always once the iteration budget is spent.
    if (iter % params.n_test == 0 || iter >= params.it_max) {
      const auto start = Clock::now();
      const ConvergenceVerdict verdict = test_convergence_verdict(system, candidate, yt, params);
      t_int = seconds_since(start);
      out.non_finite = out.non_finite || verdict.non_finite;
      if (verdict.converged) {
        out.status = ControlStatus::success;
        break;
      }
    }
    if (iter >= params.it_max) {
      out.status = ControlStatus::iteration_limit;
      break;
    }

    auto start = Clock::now();
    VariationalResult var;
    try {
      var = integrate_variational(system, candidate, params.dt, params.t_max);
    } catch (const NonFiniteState& e) {
      throw NonFiniteState(e.step(), e.state(),
                           "iteration " + std::to_string(iter) + ": " + e.what());
    }
    const double t_var = seconds_since(start);

    start = Clock::now();
    const ClosestApproach closest =
        find_closest_approach(var.trajectory, yt, params.metric);
    LinearizedConstraints lin =
        linearize(cs, candidate, default_activation_band(cs, candidate));
    IncrementSolution sol =
        solve_increment(forecast_problem(var, closest.index, yt, candidate, lin, params), solver);
    const std::size_t last = var.trajectory.size() - 1;
    if (sol.status == IncrementStatus::stalled && closest.index != last) {
      // No eligible descent at t*, e.g. a resting start where every grid
      // point ties and t* = 0. Forecast at the end of the window instead.
      sol = solve_increment(forecast_problem(var, last, yt, candidate, lin, params), solver);
    }
    // A stalled iteration adds no iterate and no timing entries.
    if (sol.status == IncrementStatus::stalled) {
      out.stall = true;
      out.status = ControlStatus::iteration_limit;
      break;
    }

    Vector next = candidate + sol.delta;
    if (cs.has_general_constraints() && !is_eligible(cs, next)) {
      // Curvature of g/h pushed the step outside; project back using the
      // full linearization at the new point.
      for (int r = 0; r < kRepairRounds && !is_eligible(cs, next); ++r) {
        IncrementProblem repair;
        repair.d = Vector::Zero(n);
        repair.m_star = Matrix::Zero(n, n);
        repair.lin = linearize(cs, next, std::numeric_limits<double>::infinity());
        repair.eps0 = params.eps0;
        repair.eps1 = params.eps1;
        next += project_feasible(repair, Vector::Zero(n), solver.projection_rounds, false);
      }
    }
    if (!is_eligible(cs, next) || !step_in_window((next - candidate).norm(), params)) {
      out.stall = true;
      out.status = ControlStatus::iteration_limit;
      break;
    }
    const double t_opt = seconds_since(start);

    candidate = std::move(next);
    out.iterates.push_back(candidate);
    out.t_int.push_back(t_int);
    out.t_var.push_back(t_var);
    out.t_opt.push_back(t_opt);
    out.forecast_before.push_back(sol.initial_residual_norm);
    out.forecast_after.push_back(sol.minimizer_residual_norm);
  }

  out.n_iter = static_cast<int>(out.iterates.size()) - 1;
  out.total_seconds = seconds_since(run_start);
  return out;
}

}  // namespace basinctl
