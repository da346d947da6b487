#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "basinctl/cli/config.hpp"

namespace basinctl::cli {

/// Exit codes shared by every command.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitError = 2 };

struct GlobalOptions {
  std::optional<std::filesystem::path> output;
  std::optional<Verbosity> verbosity;
  std::optional<unsigned> threads;
};

/// Runs control on the config. 0 on success, 1 on iteration limit or stall,
/// 2 on config or I/O errors (never after the control run has started).
int cmd_control(const std::filesystem::path& config, const GlobalOptions& opts,
                std::ostream& out, std::ostream& err);

/// Suite or scaling benchmark. 0 iff every instance was generated.
int cmd_bench(const std::filesystem::path& config, const GlobalOptions& opts, std::ostream& out,
              std::ostream& err);

/// Jacobian and tangent-forecast checks on the configured model.
/// 0 iff both pass, 1 on threshold violation, 2 on config errors.
int cmd_validate(const std::filesystem::path& config, const GlobalOptions& opts,
                 std::ostream& out, std::ostream& err);

}  // namespace basinctl::cli
