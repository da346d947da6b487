#include "basinctl/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "basinctl/errors.hpp"

namespace basinctl {

namespace {

void check_dimension(const DynamicalSystem& system, const Vector& y) {
  if (static_cast<std::size_t>(y.size()) != system.dimension) {
    throw DimensionMismatch("state has " + std::to_string(y.size()) + " components, system '" +
                            system.name + "' expects " + std::to_string(system.dimension));
  }
}

}  // namespace

double fd_step(double x) {
  static const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  return root_eps * std::max(1.0, std::abs(x));
}

Vector evaluate_rhs(const DynamicalSystem& system, const Vector& y) {
  check_dimension(system, y);
  Vector out = system.rhs(y);
  if (static_cast<std::size_t>(out.size()) != system.dimension) {
    throw DimensionMismatch("rhs of '" + system.name + "' returned " +
                            std::to_string(out.size()) + " components");
  }
  if (!out.allFinite()) throw NonFiniteOutput("rhs of '" + system.name + "' is not finite");
  return out;
}

JacobianMatrix numerical_jacobian(const RhsFn& f, const Vector& y) {
  const Eigen::Index n = y.size();
  Vector probe = y;
  Matrix jac;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = fd_step(y[j]);
    probe[j] = y[j] + h;
    const Vector plus = f(probe);
    probe[j] = y[j] - h;
    const Vector minus = f(probe);
    probe[j] = y[j];
    if (j == 0) jac.resize(plus.size(), n);
    // (y+h) - (y-h) is not exactly 2h in floating point.
    jac.col(j) = (plus - minus) / ((y[j] + h) - (y[j] - h));
  }
  return jac;
}

JacobianMatrix jacobian(const DynamicalSystem& system, const Vector& y) {
  check_dimension(system, y);
  JacobianMatrix jac;
  if (system.analytic_jacobian) {
    jac = system.analytic_jacobian(y);
  } else if (system.sparse_jacobian) {
    jac = Matrix(system.sparse_jacobian(y));
  } else {
    jac = numerical_jacobian(system.rhs, y);
  }
  const auto n = static_cast<Eigen::Index>(system.dimension);
  if (jac.rows() != n || jac.cols() != n) {
    throw DimensionMismatch("Jacobian of '" + system.name + "' has wrong shape");
  }
  if (!jac.allFinite()) throw NonFiniteOutput("Jacobian of '" + system.name + "' is not finite");
  return jac;
}

Matrix jacobian_times(const DynamicalSystem& system, const Vector& y, const Matrix& m) {
  if (system.jacobian_product) {
    check_dimension(system, y);
    Matrix out(m.rows(), m.cols());
    system.jacobian_product(y, m, out);
    return out;
  }
  if (system.sparse_jacobian) {
    const SparseMatrix jac = system.sparse_jacobian(y);
    return jac * m;
  }
  return jacobian(system, y) * m;
}

}  // namespace basinctl
