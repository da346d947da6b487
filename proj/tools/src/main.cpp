#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "basinctl/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace basinctl::cli;

  CLI::App app{"Drive a dynamical system into a target basin with constrained perturbations"};
  app.require_subcommand(1);

  GlobalOptions opts;
  std::string output;
  std::string verbosity;
  unsigned threads = 0;
  app.add_option("--output", output, "Report path (default: standard output)");
  app.add_option("--verbosity", verbosity, "Control report: lean or full")
      ->check(CLI::IsMember({"lean", "full"}));
  app.add_option("--threads", threads, "Worker threads for bench")->check(CLI::PositiveNumber);

  std::string config;
  auto* control = app.add_subcommand("control", "Search for a compensatory perturbation");
  control->add_option("config", config, "Run config (JSON)")->required();
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite or scaling sweep");
  bench->add_option("config", config, "Bench config (JSON)")->required();
  auto* validate = app.add_subcommand("validate", "Check Jacobian and variational forecasts");
  validate->add_option("config", config, "Config with a model section (JSON)")->required();

  // Global flags are also accepted after the subcommand.
  for (auto* sub : {control, bench, validate}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  if (!output.empty()) opts.output = output;
  if (verbosity == "full") opts.verbosity = Verbosity::full;
  if (verbosity == "lean") opts.verbosity = Verbosity::lean;
  if (threads > 0) opts.threads = threads;

  if (*control) return cmd_control(config, opts, std::cout, std::cerr);
  if (*bench) return cmd_bench(config, opts, std::cout, std::cerr);
  return cmd_validate(config, opts, std::cout, std::cerr);
}
