#include "basinctl/cli/commands.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "basinctl/cli/report.hpp"
#include "basinctl/errors.hpp"
#include "basinctl/validation.hpp"

namespace basinctl::cli {

namespace {

namespace fs = std::filesystem;

void write_text(const std::optional<fs::path>& path, const std::string& text, std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream file(*path);
  if (!file) throw Error("cannot write " + path->string());
  file << text;
}

}  // namespace

int cmd_control(const fs::path& config, const GlobalOptions& opts, std::ostream& out,
                std::ostream& err) {
  RunConfig cfg;
  DynamicalSystem system;
  ConstraintSet cs(1);
  try {
    cfg = parse_config(config);
    if (opts.output) cfg.output.report = *opts.output;
    if (opts.verbosity) cfg.output.verbosity = *opts.verbosity;
    validate(cfg);
    system = cfg.build_system();
    cs = cfg.constraint_set();
    if (!is_eligible(cs, cfg.y0)) throw IneligibleStart("y0 violates the configured constraints");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  // From here on failures are reported as 1: the run itself has started.
  try {
    const ControlOutcome outcome = control(system, cfg.y0, cfg.yt, cs, cfg.control);
    const std::string report = cfg.output.verbosity == Verbosity::full ? full_report(outcome)
                                                                        : lean_report(outcome);
    write_text(cfg.output.report, report, out);
    if (cfg.output.trajectory) {
      const Trajectory traj =
          integrate_trajectory(system, outcome.final_state(), cfg.control.dt, cfg.control.t_test);
      write_trajectory_csv(*cfg.output.trajectory, traj);
    }
    if (outcome.stall) err << "control stalled after " << outcome.n_iter << " iterations\n";
    return outcome.status == ControlStatus::success ? kExitOk : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_bench(const fs::path& config, const GlobalOptions& opts, std::ostream& out,
              std::ostream& err) {
  BenchConfig cfg;
  try {
    cfg = parse_bench_config(config);
    if (opts.output) cfg.output = *opts.output;
    if (opts.threads) cfg.threads = *opts.threads;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (cfg.mode == BenchMode::suite) {
      std::vector<BenchInstance> instances;
      instances.reserve(cfg.seeds.size());
      for (const auto seed : cfg.seeds) {
        instances.push_back(generate_instance(cfg.n, seed, cfg.generator));
      }
      const SuiteResult result = run_suite(instances, cfg.control, cfg.threads);
      write_text(cfg.output, suite_report(instances, result), out);
      err << "success_fraction " << result.success_fraction << " (" << result.successes << "/"
          << instances.size() << ")\n";
      return kExitOk;
    }

    const ScalingReport report =
        run_scaling(cfg.dims, cfg.seeds_per_dim, cfg.control, cfg.generator, cfg.threads);
    std::ostringstream csv;
    write_scaling_csv(csv, report);
    if (cfg.output) {
      write_text(cfg.output, csv.str(), out);
      fs::path summary = *cfg.output;
      summary.replace_extension(".json");
      if (summary == *cfg.output) summary += ".summary.json";
      write_text(summary, scaling_summary(report), out);
    } else {
      out << csv.str() << scaling_summary(report);
    }
    err << "fitted_exponent " << report.fitted_exponent << '\n';
    return kExitOk;
  } catch (const GenerationFailed& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_validate(const fs::path& config, const GlobalOptions& opts, std::ostream& out,
                 std::ostream& err) {
  DynamicalSystem system;
  try {
    system = build_model(parse_model_config(config));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  try {
    const ValidationOptions vopts;
    const ValidationReport report = validate_system(system, vopts);
    std::ostringstream text;
    text << "model " << system.name << " (n = " << system.dimension << ")\n";
    if (report.jacobian_checked) {
      text << "jacobian: max |analytic - numerical| = " << report.max_jacobian_error
           << " (threshold " << vopts.jacobian_tol << ") "
           << (report.jacobian_ok ? "PASS" : "FAIL") << '\n';
    } else {
      text << "jacobian: no analytic Jacobian, skipped\n";
    }
    text << "forecast: max defect = " << report.max_defect << ", ratios";
    if (report.defect_ratios.empty()) text << " (none, defects below floor)";
    for (const double r : report.defect_ratios) text << ' ' << r;
    text << " (band [" << vopts.ratio_low << ", " << vopts.ratio_high << "]) "
         << (report.forecast_ok ? "PASS" : "FAIL") << '\n';
    write_text(opts.output, text.str(), out);
    return report.ok() ? kExitOk : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace basinctl::cli
