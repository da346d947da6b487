#pragma once

#include <ostream>
#include <string>

#include "basinctl/bench.hpp"
#include "basinctl/controller.hpp"

namespace basinctl::cli {

/// {"y0_prime": [...]}: the final perturbed state only.
std::string lean_report(const ControlOutcome& outcome);

/// {"status", "stall", "n_iter", "time", "t_int", "t_var", "t_opt", "y0"}.
std::string full_report(const ControlOutcome& outcome);

/// {"instances": [...], "success_fraction", "per_instance": [...]}.
std::string suite_report(const std::vector<BenchInstance>& instances, const SuiteResult& result);

/// `n,mean_seconds,stddev_seconds` rows.
void write_scaling_csv(std::ostream& out, const ScalingReport& report);

/// {"dimensions", "mean_seconds", "stddev_seconds", "fitted_exponent", ...}.
std::string scaling_summary(const ScalingReport& report);

}  // namespace basinctl::cli
