#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "basinctl/constraints.hpp"
#include "basinctl/controller.hpp"
#include "basinctl/models.hpp"

namespace basinctl {

/// Knobs of the instance generator. Defaults produce nontrivial but
/// solvable instances.
struct GeneratorOptions {
  double coupling = 0.05;
  double mean_degree = 4.0;        ///< edge probability min(1, mean_degree / n)
  double perturbable_fraction = 0.5;
  double box_half_width = 2.0;
  double witness_noise = 0.3;
  double flip_low = -1.2;
  double flip_high = -0.8;
  int max_attempts = 100;
  int max_graph_attempts = 1000;
  /// Params used for the basin-membership checks.
  ControlParams check_params;
};

struct BenchInstance {
  DynamicalSystem system;
  EdgeList edges;
  double coupling = 0.0;
  Vector y0;
  Vector yt;
  ConstraintSet cs{1};
  Vector witness;
  std::vector<std::size_t> perturbable;  ///< sorted node indices free to move
  std::uint64_t seed = 0;
  std::size_t n() const noexcept { return static_cast<std::size_t>(y0.size()); }
};

/// Witness-first construction on a connected Erdos-Renyi bistable network.
/// Throws ValidationError for n < 2 and GenerationFailed when no instance is
/// accepted within max_attempts.
BenchInstance generate_instance(std::size_t n, std::uint64_t seed,
                                const GeneratorOptions& opts = {});

/// Independent re-check of an instance's defining properties.
struct InstanceCheck {
  bool witness_converges = false;
  bool y0_diverges = false;
  bool witness_eligible = false;
  bool frozen_match = false;
  bool ok() const { return witness_converges && y0_diverges && witness_eligible && frozen_match; }
};
InstanceCheck verify_instance(const BenchInstance& inst, const ControlParams& params);

struct InstanceOutcome {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  ControlOutcome outcome;
  double seconds = 0.0;
  /// Fresh convergence test of the final iterate (success cases only).
  bool reverified = false;
};

struct SuiteResult {
  std::vector<InstanceOutcome> per_instance;
  std::size_t successes = 0;
  double success_fraction = 0.0;
};

/// Runs control on each instance. `threads` > 1 fans out over a worker pool;
/// the result order always matches the input order.
SuiteResult run_suite(const std::vector<BenchInstance>& instances, const ControlParams& params,
                      unsigned threads = 1);

struct ScalingReport {
  std::vector<std::size_t> dimensions;
  std::vector<double> mean_runtimes;
  std::vector<double> stddev_runtimes;
  double fitted_exponent = 0.0;
  std::vector<SuiteResult> suites;
};

/// Least-squares slope of log(runtime) against log(n).
double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

/// Times a single control run on one instance; swappable for tests.
using InstanceRunner = std::function<double(const BenchInstance&, const ControlParams&)>;

/// Mean wall-clock control time per dimension with a log-log fit. Seeds are
/// 1..seeds_per_dim for every dimension. Throws ValidationError if fewer
/// than 3 dimensions are given.
ScalingReport run_scaling(const std::vector<std::size_t>& dims, int seeds_per_dim,
                          const ControlParams& params, const GeneratorOptions& gen = {},
                          unsigned threads = 1);

ScalingReport run_scaling(const std::vector<std::size_t>& dims, int seeds_per_dim,
                          const ControlParams& params, const GeneratorOptions& gen,
                          const InstanceRunner& runner);

}  // namespace basinctl
