#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "wmrs/extension.hpp"

namespace wmrs {

struct CliOptions {
  std::string command;  // allocate | mechanism | verify | regret | hardness
  std::string instance_path;
  std::string graph_path;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  GradientMode gradient = GradientMode::Exact;
  double eta = 0.01;
  std::optional<std::int64_t> welfare_samples;
  std::optional<std::int64_t> trials;
  int bidder = 0;
};

struct CommandResult {
  std::string report_json;  // deterministic given (command, flags, seed, inputs)
  int exit_code = 0;        // 2 when the verification suite fails
};

// Executes one subcommand and renders its report (without the wall-time
// field, which the binary adds when writing). Throws ValidationError or
// BudgetError on bad inputs.
CommandResult run_command(const CliOptions& options);

// Full command-line entry point: parses flags, runs the command, writes the
// report. Exit codes: 0 success, 1 validation error, 2 verification failure,
// 3 budget error.
int cli_main(int argc, char** argv);

}  // namespace wmrs
