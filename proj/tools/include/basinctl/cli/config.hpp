#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "basinctl/bench.hpp"
#include "basinctl/constraints.hpp"
#include "basinctl/controller.hpp"
#include "basinctl/models.hpp"

namespace basinctl::cli {

enum class Verbosity { lean, full };

struct ModelSpec {
  std::string name;
  ModelParams params;
  /// Edge-list file, resolved against the config file's directory.
  std::optional<std::filesystem::path> topology;
  /// Inline edges; used when no topology file is given.
  std::optional<EdgeList> edges;
};

struct OutputSpec {
  std::optional<std::filesystem::path> report;
  Verbosity verbosity = Verbosity::lean;
  std::optional<std::filesystem::path> trajectory;
};

/// A single control run: model, endpoints, box constraints, parameters.
struct RunConfig {
  ModelSpec model;
  Vector y0;
  Vector yt;
  Vector lb;  ///< -inf entries allowed
  Vector ub;  ///< +inf entries allowed
  double feas_tol = kDefaultFeasTol;
  ControlParams control;
  OutputSpec output;

  DynamicalSystem build_system() const;
  ConstraintSet constraint_set() const;
};

enum class BenchMode { suite, scaling };

struct BenchConfig {
  BenchMode mode = BenchMode::suite;
  std::size_t n = 10;
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> dims;
  int seeds_per_dim = 5;
  ControlParams control;
  GeneratorOptions generator;
  std::optional<std::filesystem::path> output;
  unsigned threads = 1;
};

/// Parse and validate a run config (JSON). Throws ParseError with the line
/// of the syntax error, or ValidationError for semantic problems. Relative
/// paths are resolved against `base_dir`.
RunConfig parse_config_text(const std::string& text,
                            const std::filesystem::path& base_dir = {});
RunConfig parse_config(const std::filesystem::path& path);

BenchConfig parse_bench_config_text(const std::string& text,
                                    const std::filesystem::path& base_dir = {});
BenchConfig parse_bench_config(const std::filesystem::path& path);

/// Reads only the "model" section of a config file; other keys are ignored.
ModelSpec parse_model_config(const std::filesystem::path& path);
DynamicalSystem build_model(const ModelSpec& spec);

/// Inverse of parse_config_text; infinities are written as "-inf"/"+inf".
std::string serialize(const RunConfig& config);

/// Checks dimensions and parameter invariants; throws ValidationError.
void validate(const RunConfig& config);

}  // namespace basinctl::cli
