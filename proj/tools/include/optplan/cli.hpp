#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace optplan {

enum ExitCode : int { kExitOk = 0, kExitInfeasible = 1, kExitInput = 2, kExitBudget = 3 };

/// Runs the `optplan` command line (args exclude the program name) and
/// returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "a..b", "a,b,c" or a single integer.
std::vector<int> parse_int_range(const std::string& text);

}  // namespace optplan
