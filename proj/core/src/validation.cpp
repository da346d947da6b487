#include "basinctl/validation.hpp"

#include <algorithm>
#include <random>

#include "basinctl/errors.hpp"
#include "basinctl/integrator.hpp"

namespace basinctl {

std::vector<double> tangent_defects(const DynamicalSystem& system, const Vector& y0,
                                    const Vector& direction, const std::vector<double>& sizes,
                                    double t, double dt) {
  if (direction.norm() == 0.0) throw ValidationError("tangent check needs a nonzero direction");
  const VariationalResult var = integrate_variational(system, y0, dt, t);
  const Vector& base = var.trajectory.states.back();
  const Matrix& m = var.matrices.back();
  const Vector unit = direction.normalized();
  std::vector<double> defects;
  defects.reserve(sizes.size());
  for (const double size : sizes) {
    const Vector delta = size * unit;
    const Vector moved = integrate_trajectory(system, y0 + delta, dt, t).states.back();
    defects.push_back((moved - base - m * delta).norm());
  }
  return defects;
}

ValidationReport validate_system(const DynamicalSystem& system, const ValidationOptions& opts) {
  ValidationReport report;
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> sample(opts.sample_low, opts.sample_high);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(system.dimension);
  auto random_state = [&] {
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) y[i] = sample(rng);
    return y;
  };

  if (system.has_analytic_jacobian()) {
    report.jacobian_checked = true;
    for (int s = 0; s < opts.jacobian_samples; ++s) {
      const Vector y = random_state();
      const Matrix diff = jacobian(system, y) - numerical_jacobian(system.rhs, y);
      report.max_jacobian_error = std::max(report.max_jacobian_error, diff.cwiseAbs().maxCoeff());
    }
    report.jacobian_ok = report.max_jacobian_error <= opts.jacobian_tol;
  }

  const std::vector<double> sizes(opts.deltas.begin(), opts.deltas.end());
  for (int s = 0; s < opts.forecast_samples; ++s) {
    const Vector y = random_state();
    Vector dir(n);
    for (Eigen::Index i = 0; i < n; ++i) dir[i] = gauss(rng);
    const std::vector<double> defects =
        tangent_defects(system, y, dir, sizes, opts.forecast_time, opts.dt);
    report.max_defect = std::max(report.max_defect, *std::max_element(defects.begin(), defects.end()));
    if (defects.back() <= opts.defect_floor) continue;
    for (std::size_t k = 1; k < defects.size(); ++k) {
      const double ratio = defects[k - 1] / defects[k];
      report.defect_ratios.push_back(ratio);
      if (!(ratio >= opts.ratio_low && ratio <= opts.ratio_high)) report.forecast_ok = false;
    }
  }
  return report;
}

}  // namespace basinctl
