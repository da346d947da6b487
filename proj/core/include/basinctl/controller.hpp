#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "basinctl/constraints.hpp"
#include "basinctl/increment.hpp"
#include "basinctl/integrator.hpp"
#include "basinctl/metric.hpp"
#include "basinctl/system.hpp"

namespace basinctl {

struct ControlParams {
  double eps0 = 1e-3;   ///< minimum increment size
  double eps1 = 5e-2;   ///< maximum increment size, at t = 0 and at t*
  int it_max = 2000;    ///< iteration limit
  double t_max = 10.0;  ///< closest-approach search window
  double dt = 0.01;     ///< integration step
  double t_test = 100.0;///< convergence test window
  double tol = 1e-2;    ///< radius of the target ball
  int n_test = 1;       ///< test for convergence every n_test iterations
  Metric metric;

  /// Throws ValidationError unless eps1 > eps0 > 0, dt <= t_max <= t_test,
  /// tol > 0, n_test >= 1 and it_max >= 0.
  void validate() const;
};

/// Success and iteration-limit exits. A stalled increment exits with
/// iteration_limit and ControlOutcome::stall set.
enum class ControlStatus : int { success = 0, iteration_limit = 1 };

struct ControlOutcome {
  ControlStatus status = ControlStatus::iteration_limit;
  bool stall = false;
  /// Set when a convergence test or forecast integration blew up.
  bool non_finite = false;
  std::vector<Vector> iterates;  ///< y0, then one entry per applied increment
  int n_iter = 0;
  double total_seconds = 0.0;
  std::vector<double> t_int;  ///< convergence-test integration, per iteration
  std::vector<double> t_var;  ///< variational integration, per iteration
  std::vector<double> t_opt;  ///< closest approach + increment solve, per iteration
  /// ||d + M delta*|| <= ||d|| telemetry, one pair per iteration.
  std::vector<double> forecast_before;
  std::vector<double> forecast_after;

  const Vector& final_state() const { return iterates.back(); }
};

struct ClosestApproach {
  std::size_t index = 0;
  double time = 0.0;
  double distance = 0.0;
};

/// Grid point of `traj` nearest to yt; earliest index wins ties.
ClosestApproach find_closest_approach(const Trajectory& traj, const Vector& yt,
                                      const Metric& metric = {});

struct ConvergenceVerdict {
  bool converged = false;
  bool non_finite = false;
  double time = 0.0;           ///< time of entry into the tol ball
  double min_distance = 0.0;   ///< closest distance seen over the window
};

/// Integrates from y0 for up to t_test and reports whether the orbit enters
/// the tol ball around yt at some grid point. Blow-up yields a negative
/// verdict with non_finite set.
ConvergenceVerdict test_convergence_verdict(const DynamicalSystem& system, const Vector& y0,
                                            const Vector& yt, const ControlParams& params);

bool test_convergence(const DynamicalSystem& system, const Vector& y0, const Vector& yt,
                      const ControlParams& params);

/// Iteratively perturbs y0 within `cs` until the perturbed state converges
/// to yt, the iteration limit is hit, or the increment stalls.
///
/// Throws IneligibleStart if y0 violates cs, DimensionMismatch on size
/// errors, ValidationError on bad params.
ControlOutcome control(const DynamicalSystem& system, const Vector& y0, const Vector& yt,
                       const ConstraintSet& cs, const ControlParams& params,
                       const IncrementOptions& solver = {});

}  // namespace basinctl
