#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "basinctl/state.hpp"

namespace basinctl {

using SparseMatrix = Eigen::SparseMatrix<double>;
using JacobianMatrix = Matrix;

using RhsFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;
using SparseJacobianFn = std::function<SparseMatrix(const Vector&)>;
using RhsIntoFn = std::function<void(const Vector&, Vector&)>;
using JacobianProductFn = std::function<void(const Vector&, const Matrix&, Matrix&)>;

/// Autonomous ODE system y' = F(y).
///
/// The right-hand side sees the state only, so time dependence cannot leak
/// in. Non-autonomous models must augment the state with a clock variable.
/// Parameters are captured by the closures; `params` keeps them for
/// reporting in declaration order.
struct DynamicalSystem {
  std::string name;
  std::size_t dimension = 0;
  std::vector<double> params;
  RhsFn rhs;
  /// Allocation-free form of rhs writing into a presized vector. Optional;
  /// must agree with rhs.
  RhsIntoFn rhs_into;
  /// Dense analytic Jacobian. Optional.
  JacobianFn analytic_jacobian;
  /// Sparse analytic Jacobian. Optional; preferred by the variational
  /// integrator when present.
  SparseJacobianFn sparse_jacobian;
  /// Writes J(y) * M into a presized matrix. Optional; fastest path for the
  /// variational integrator. Must agree with the Jacobian above.
  JacobianProductFn jacobian_product;

  bool has_analytic_jacobian() const { return bool(analytic_jacobian) || bool(sparse_jacobian); }
};

/// F(y), checked for dimension and finiteness.
Vector evaluate_rhs(const DynamicalSystem& system, const Vector& y);

/// Analytic Jacobian when supplied, else central finite differences.
JacobianMatrix jacobian(const DynamicalSystem& system, const Vector& y);

/// Central-difference Jacobian regardless of whether an analytic one exists.
/// Column j uses step sqrt(eps) * max(1, |y_j|).
JacobianMatrix numerical_jacobian(const RhsFn& f, const Vector& y);

/// J(y) * m, using the direct product or the sparse Jacobian when available.
Matrix jacobian_times(const DynamicalSystem& system, const Vector& y, const Matrix& m);

/// Finite-difference step for a component of magnitude |x|.
double fd_step(double x);

}  // namespace basinctl
