#pragma once

#include <cstddef>
#include <functional>
#include <limits>

#include "basinctl/state.hpp"

namespace basinctl {

using ConstraintFn = std::function<Vector(const Vector&)>;

inline constexpr double kDefaultFeasTol = 1e-8;

/// Region of eligible states: lb <= y <= ub, g(y) <= 0, h(y) = 0, each with
/// slack feas_tol.
class ConstraintSet {
 public:
  /// Unbounded box in dimension n.
  explicit ConstraintSet(std::size_t n, double feas_tol = kDefaultFeasTol);
  /// Throws DimensionMismatch on length mismatch, ValidationError if any
  /// lb[i] > ub[i] or feas_tol <= 0.
  ConstraintSet(Vector lb, Vector ub, double feas_tol = kDefaultFeasTol);

  ConstraintSet& with_inequality(ConstraintFn g);
  ConstraintSet& with_equality(ConstraintFn h);
  /// Pins component i to `value` (lb = ub = value).
  ConstraintSet& freeze(std::size_t i, double value);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(lb_.size()); }
  const Vector& lb() const noexcept { return lb_; }
  const Vector& ub() const noexcept { return ub_; }
  double feas_tol() const noexcept { return feas_tol_; }
  const ConstraintFn& g() const noexcept { return g_; }
  const ConstraintFn& h() const noexcept { return h_; }
  bool has_general_constraints() const noexcept { return bool(g_) || bool(h_); }

  ConstraintSet with_feas_tol(double feas_tol) const;

 private:
  Vector lb_;
  Vector ub_;
  ConstraintFn g_;
  ConstraintFn h_;
  double feas_tol_;
};

/// Local linear model of the constraint region around a point y, expressed
/// in the displacement delta = y' - y.
struct LinearizedConstraints {
  Matrix active_ineq_normals;  ///< rows grad g_a, only near-active a
  Vector active_ineq_values;   ///< g_a(y)
  Matrix eq_normals;           ///< rows grad h_b
  Vector eq_values;            ///< h_b(y)
  Vector bound_lo;             ///< lb - y
  Vector bound_hi;             ///< ub - y
  double feas_tol = kDefaultFeasTol;

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(bound_lo.size()); }
  /// Box-only region with no rows, in dimension n.
  static LinearizedConstraints unconstrained(std::size_t n);
};

bool is_eligible(const ConstraintSet& cs, const Vector& y);

/// Largest violation over box, g and h (0 when strictly feasible).
double max_violation(const ConstraintSet& cs, const Vector& y);

/// Gradients by central differences. Inequality rows are kept only when
/// g_a(y) >= -activation_band.
LinearizedConstraints linearize(const ConstraintSet& cs, const Vector& y,
                                double activation_band);

/// Default activation band: max(feas_tol, 1e-3 * max(1, max_a |g_a(y)|)).
double default_activation_band(const ConstraintSet& cs, const Vector& y);

}  // namespace basinctl
