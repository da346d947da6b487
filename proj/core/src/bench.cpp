#include "basinctl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <thread>

#include "basinctl/errors.hpp"

namespace basinctl {

namespace {

bool is_connected(std::size_t n, const EdgeList& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (const std::size_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        frontier.push(v);
      }
    }
  }
  return count == n;
}

EdgeList connected_erdos_renyi(std::size_t n, double p, int max_attempts, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    EdgeList edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (unit(rng) < p) edges.emplace_back(i, j);
      }
    }
    if (is_connected(n, edges)) return edges;
  }
  throw GenerationFailed("no connected graph on " + std::to_string(n) + " nodes after " +
                         std::to_string(max_attempts) + " attempts");
}

}  // namespace

BenchInstance generate_instance(std::size_t n, std::uint64_t seed, const GeneratorOptions& opts) {
  if (n < 2) throw ValidationError("bench instances need n >= 2");
  opts.check_params.validate();
  std::mt19937_64 rng(seed);

  BenchInstance inst;
  inst.seed = seed;
  inst.coupling = opts.coupling;
  const double p = std::min(1.0, opts.mean_degree / static_cast<double>(n));
  inst.edges = connected_erdos_renyi(n, p, opts.max_graph_attempts, rng);
  inst.system = make_bistable_network(n, opts.coupling, inst.edges);

  const auto size = static_cast<Eigen::Index>(n);
  inst.yt = Vector::Ones(size);
  if (evaluate_rhs(inst.system, inst.yt).norm() > 1e-8) {
    throw GenerationFailed("all-ones state is not a fixed point of the generated network");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto free_count = static_cast<std::size_t>(
      std::ceil(opts.perturbable_fraction * static_cast<double>(n)));
  inst.perturbable.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(free_count));
  std::sort(inst.perturbable.begin(), inst.perturbable.end());

  std::uniform_real_distribution<double> noise(-opts.witness_noise, opts.witness_noise);
  std::uniform_real_distribution<double> flipped(opts.flip_low, opts.flip_high);
  std::uniform_int_distribution<std::size_t> flip_count(1, inst.perturbable.size());

  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    Vector witness(size);
    for (Eigen::Index i = 0; i < size; ++i) witness[i] = 1.0 + noise(rng);

    std::vector<std::size_t> flip = inst.perturbable;
    std::shuffle(flip.begin(), flip.end(), rng);
    flip.resize(flip_count(rng));
    Vector y0 = witness;
    for (const std::size_t i : flip) y0[static_cast<Eigen::Index>(i)] = flipped(rng);

    if (!test_convergence(inst.system, witness, inst.yt, opts.check_params)) continue;
    if (test_convergence(inst.system, y0, inst.yt, opts.check_params)) continue;

    Vector lb = y0;
    Vector ub = y0;
    for (const std::size_t i : inst.perturbable) {
      const auto k = static_cast<Eigen::Index>(i);
      lb[k] = y0[k] - opts.box_half_width;
      ub[k] = y0[k] + opts.box_half_width;
    }
    ConstraintSet cs(lb, ub);
    if (!is_eligible(cs, witness)) continue;

    inst.y0 = std::move(y0);
    inst.witness = std::move(witness);
    inst.cs = std::move(cs);
    return inst;
  }
  throw GenerationFailed("no valid instance for n = " + std::to_string(n) + ", seed = " +
                         std::to_string(seed) + " after " + std::to_string(opts.max_attempts) +
                         " attempts");
}

InstanceCheck verify_instance(const BenchInstance& inst, const ControlParams& params) {
  InstanceCheck check;
  check.witness_converges = test_convergence(inst.system, inst.witness, inst.yt, params);
  check.y0_diverges = !test_convergence(inst.system, inst.y0, inst.yt, params);
  check.witness_eligible = is_eligible(inst.cs, inst.witness);
  check.frozen_match = true;
  std::vector<bool> free(inst.n(), false);
  for (const std::size_t i : inst.perturbable) free[i] = true;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    if (!free[i] && inst.witness[k] != inst.y0[k]) check.frozen_match = false;
  }
  return check;
}

SuiteResult run_suite(const std::vector<BenchInstance>& instances, const ControlParams& params,
                      unsigned threads) {
  SuiteResult result;
  result.per_instance.resize(instances.size());

  auto run_one = [&](std::size_t i) {
    const BenchInstance& inst = instances[i];
    InstanceOutcome& slot = result.per_instance[i];
    slot.seed = inst.seed;
    slot.n = inst.n();
    const auto start = std::chrono::steady_clock::now();
    slot.outcome = control(inst.system, inst.y0, inst.yt, inst.cs, params);
    slot.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (slot.outcome.status == ControlStatus::success) {
      slot.reverified = test_convergence(inst.system, slot.outcome.final_state(), inst.yt, params);
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(instances.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < instances.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(instances.size());
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < instances.size(); i = next++) {
          try {
            run_one(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& worker : pool) worker.join();
    for (const auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  for (const auto& r : result.per_instance) {
    if (r.outcome.status == ControlStatus::success && r.reverified) ++result.successes;
  }
  result.success_fraction = instances.empty()
                                ? 0.0
                                : static_cast<double>(result.successes) /
                                      static_cast<double>(instances.size());
  return result;
}

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw ValidationError("log-log fit needs at least two matching points");
  }
  const auto count = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw ValidationError("log-log fit needs positive data");
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= count;
  my /= count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(ys[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw ValidationError("log-log fit needs distinct x values");
  return sxy / sxx;
}

namespace {

void check_scaling_args(const std::vector<std::size_t>& dims, int seeds_per_dim) {
  if (dims.size() < 3) throw ValidationError("scaling needs at least 3 dimensions");
  if (seeds_per_dim < 1) throw ValidationError("scaling needs seeds_per_dim >= 1");
  if (std::adjacent_find(dims.begin(), dims.end(), std::greater_equal<>()) != dims.end()) {
    throw ValidationError("scaling dimensions must be strictly increasing");
  }
}

void append_stats(ScalingReport& report, const std::vector<double>& times) {
  const double mean =
      std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
  double var = 0.0;
  for (const double t : times) var += (t - mean) * (t - mean);
  var = times.size() > 1 ? var / static_cast<double>(times.size() - 1) : 0.0;
  report.mean_runtimes.push_back(mean);
  report.stddev_runtimes.push_back(std::sqrt(var));
}

void fit(ScalingReport& report) {
  const std::vector<double> xs(report.dimensions.begin(), report.dimensions.end());
  report.fitted_exponent = fit_loglog_slope(xs, report.mean_runtimes);
}

}  // namespace

ScalingReport run_scaling(const std::vector<std::size_t>& dims, int seeds_per_dim,
                          const ControlParams& params, const GeneratorOptions& gen,
                          const InstanceRunner& runner) {
  check_scaling_args(dims, seeds_per_dim);
  ScalingReport report;
  report.dimensions = dims;
  for (const std::size_t n : dims) {
    std::vector<double> times;
    for (int s = 1; s <= seeds_per_dim; ++s) {
      times.push_back(runner(generate_instance(n, static_cast<std::uint64_t>(s), gen), params));
    }
    append_stats(report, times);
  }
  fit(report);
  return report;
}

ScalingReport run_scaling(const std::vector<std::size_t>& dims, int seeds_per_dim,
                          const ControlParams& params, const GeneratorOptions& gen,
                          unsigned threads) {
  check_scaling_args(dims, seeds_per_dim);
  ScalingReport report;
  report.dimensions = dims;
  for (const std::size_t n : dims) {
    std::vector<BenchInstance> instances;
    for (int s = 1; s <= seeds_per_dim; ++s) {
      instances.push_back(generate_instance(n, static_cast<std::uint64_t>(s), gen));
    }
    SuiteResult suite = run_suite(instances, params, threads);
    std::vector<double> times;
    for (const auto& r : suite.per_instance) times.push_back(r.seconds);
    append_stats(report, times);
    report.suites.push_back(std::move(suite));
  }
  fit(report);
  return report;
}

}  // namespace basinctl
