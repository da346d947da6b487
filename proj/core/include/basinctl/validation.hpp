#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "basinctl/system.hpp"

namespace basinctl {

struct ValidationOptions {
  int jacobian_samples = 100;
  double sample_low = -2.0;
  double sample_high = 2.0;
  double jacobian_tol = 1e-5;
  int forecast_samples = 5;
  double forecast_time = 1.0;
  double dt = 0.01;
  std::array<double, 3> deltas{1e-3, 5e-4, 2.5e-4};
  double ratio_low = 3.5;
  double ratio_high = 4.5;
  /// Defects below this are treated as exact (ratio check skipped).
  double defect_floor = 1e-13;
  std::uint64_t seed = 12345;
};

/// ||Phi_t(y0 + delta) - Phi_t(y0) - M(t) delta|| for each delta.
std::vector<double> tangent_defects(const DynamicalSystem& system, const Vector& y0,
                                    const Vector& direction, const std::vector<double>& sizes,
                                    double t, double dt);

struct ValidationReport {
  double max_jacobian_error = 0.0;
  bool jacobian_checked = false;  ///< false when no analytic Jacobian exists
  std::vector<double> defect_ratios;
  double max_defect = 0.0;
  bool jacobian_ok = true;
  bool forecast_ok = true;
  bool ok() const { return jacobian_ok && forecast_ok; }
};

/// Analytic-vs-numerical Jacobian comparison and tangent-forecast defect
/// scaling at random states.
ValidationReport validate_system(const DynamicalSystem& system, const ValidationOptions& opts = {});

}  // namespace basinctl
