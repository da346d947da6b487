#include "basinctl/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "basinctl/errors.hpp"
#include "basinctl/system.hpp"

namespace basinctl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dimension(const ConstraintSet& cs, const Vector& y) {
  if (static_cast<std::size_t>(y.size()) != cs.dimension()) {
    throw DimensionMismatch("state has " + std::to_string(y.size()) +
                            " components, constraint set expects " +
                            std::to_string(cs.dimension()));
  }
}

Vector eval_checked(const ConstraintFn& fn, const Vector& y, const char* which) {
  Vector out = fn(y);
  if (!out.allFinite()) throw NonFiniteOutput(std::string("constraint map ") + which +
                                              " returned non-finite values");
  return out;
}

/// Central-difference rows: out(a, j) = d fn_a / d y_j.
Matrix fd_rows(const ConstraintFn& fn, const Vector& y, Eigen::Index rows) {
  Matrix out(rows, y.size());
  Vector probe = y;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const double h = fd_step(y[j]);
    probe[j] = y[j] + h;
    const Vector plus = fn(probe);
    probe[j] = y[j] - h;
    const Vector minus = fn(probe);
    probe[j] = y[j];
    out.col(j) = (plus - minus) / ((y[j] + h) - (y[j] - h));
  }
  if (!out.allFinite()) throw NonFiniteOutput("constraint gradient is not finite");
  return out;
}

}  // namespace

ConstraintSet::ConstraintSet(std::size_t n, double feas_tol)
    : ConstraintSet(Vector::Constant(static_cast<Eigen::Index>(n), -kInf),
                    Vector::Constant(static_cast<Eigen::Index>(n), kInf), feas_tol) {}

ConstraintSet::ConstraintSet(Vector lb, Vector ub, double feas_tol)
    : lb_(std::move(lb)), ub_(std::move(ub)), feas_tol_(feas_tol) {
  if (lb_.size() != ub_.size()) throw DimensionMismatch("lb and ub differ in length");
  if (lb_.size() == 0) throw DimensionMismatch("constraint set needs dimension >= 1");
  if (!(feas_tol_ > 0.0) || !std::isfinite(feas_tol_)) {
    throw ValidationError("feas_tol must be positive and finite");
  }
  for (Eigen::Index i = 0; i < lb_.size(); ++i) {
    if (std::isnan(lb_[i]) || std::isnan(ub_[i]) || lb_[i] == kInf || ub_[i] == -kInf) {
      throw ValidationError("invalid bound at component " + std::to_string(i));
    }
    if (lb_[i] > ub_[i]) {
      throw ValidationError("lb > ub at component " + std::to_string(i));
    }
  }
}

ConstraintSet& ConstraintSet::with_inequality(ConstraintFn g) {
  g_ = std::move(g);
  return *this;
}

ConstraintSet& ConstraintSet::with_equality(ConstraintFn h) {
  h_ = std::move(h);
  return *this;
}

ConstraintSet& ConstraintSet::freeze(std::size_t i, double value) {
  if (i >= dimension()) throw DimensionMismatch("freeze index out of range");
  if (!std::isfinite(value)) throw ValidationError("frozen value must be finite");
  lb_[static_cast<Eigen::Index>(i)] = value;
  ub_[static_cast<Eigen::Index>(i)] = value;
  return *this;
}

ConstraintSet ConstraintSet::with_feas_tol(double feas_tol) const {
  ConstraintSet copy(lb_, ub_, feas_tol);
  copy.g_ = g_;
  copy.h_ = h_;
  return copy;
}

LinearizedConstraints LinearizedConstraints::unconstrained(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  LinearizedConstraints lin;
  lin.active_ineq_normals.resize(0, size);
  lin.active_ineq_values.resize(0);
  lin.eq_normals.resize(0, size);
  lin.eq_values.resize(0);
  lin.bound_lo = Vector::Constant(size, -kInf);
  lin.bound_hi = Vector::Constant(size, kInf);
  return lin;
}

double max_violation(const ConstraintSet& cs, const Vector& y) {
  check_dimension(cs, y);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    worst = std::max({worst, cs.lb()[i] - y[i], y[i] - cs.ub()[i]});
  }
  if (cs.g()) {
    const Vector g = eval_checked(cs.g(), y, "g");
    if (g.size() > 0) worst = std::max(worst, g.maxCoeff());
  }
  if (cs.h()) {
    const Vector h = eval_checked(cs.h(), y, "h");
    if (h.size() > 0) worst = std::max(worst, h.cwiseAbs().maxCoeff());
  }
  return worst;
}

bool is_eligible(const ConstraintSet& cs, const Vector& y) {
  return max_violation(cs, y) <= cs.feas_tol();
}

double default_activation_band(const ConstraintSet& cs, const Vector& y) {
  double scale = 1.0;
  if (cs.g()) {
    const Vector g = eval_checked(cs.g(), y, "g");
    if (g.size() > 0) scale = std::max(scale, g.cwiseAbs().maxCoeff());
  }
  return std::max(cs.feas_tol(), 1e-3 * scale);
}

LinearizedConstraints linearize(const ConstraintSet& cs, const Vector& y,
                                double activation_band) {
  check_dimension(cs, y);
  if (!(activation_band > 0.0)) throw ValidationError("activation_band must be positive");
  LinearizedConstraints lin = LinearizedConstraints::unconstrained(cs.dimension());
  lin.feas_tol = cs.feas_tol();
  lin.bound_lo = cs.lb() - y;
  lin.bound_hi = cs.ub() - y;

  if (cs.g()) {
    const Vector g = eval_checked(cs.g(), y, "g");
    std::vector<Eigen::Index> active;
    for (Eigen::Index a = 0; a < g.size(); ++a) {
      if (g[a] >= -activation_band) active.push_back(a);
    }
    if (!active.empty()) {
      const Matrix grads = fd_rows(cs.g(), y, g.size());
      lin.active_ineq_normals.resize(static_cast<Eigen::Index>(active.size()), y.size());
      lin.active_ineq_values.resize(static_cast<Eigen::Index>(active.size()));
      for (std::size_t r = 0; r < active.size(); ++r) {
        const auto row = static_cast<Eigen::Index>(r);
        lin.active_ineq_normals.row(row) = grads.row(active[r]);
        lin.active_ineq_values[row] = g[active[r]];
      }
    }
  }
  if (cs.h()) {
    lin.eq_values = eval_checked(cs.h(), y, "h");
    if (lin.eq_values.size() > 0) lin.eq_normals = fd_rows(cs.h(), y, lin.eq_values.size());
  }
  return lin;
}

}  // namespace basinctl
