#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/scenario.hpp"

namespace oamopo::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kNumericalError = 3 };

/// Parses `args` (without the program name) and runs the selected subcommand.
/// Returns the process exit code; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs a resolved configuration. Throws ConfigError, DomainError or
/// NumericalError.
void execute(const ScenarioConfig& config, std::ostream& out);

}  // namespace oamopo::cli
