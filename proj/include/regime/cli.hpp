#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace regime::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kPipelineError = 1;
inline constexpr int kInputError = 2;
inline constexpr int kConfigError = 3;

/// Runs the command line (args excludes the program name). Subcommands:
/// estimate, tstar, test, simulate. Never throws; returns an exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace regime::cli
