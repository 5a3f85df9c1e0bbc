#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cvn::cli {

enum ExitCode : int {
  ok = 0,
  invalid_input = 2,
  rank_mismatch = 3,
  budget_exhausted = 4,
  internal_error = 5,
};

/// Parses argv (argv[0] is the program name) and runs one command. Reports
/// go to `out`, diagnostics to `err`; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvn::cli
