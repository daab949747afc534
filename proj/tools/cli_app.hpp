#pragma once

#include <iosfwd>

namespace specfact::cli {

/// Stable exit codes of the specfact command line.
enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kNonConvergence = 2,
  kVerificationFailure = 3,
  kComparisonFailure = 4,
};

/// Runs the command line with the given arguments (argv[0] is the program
/// name). JSON goes to `out` unless --out names a file; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specfact::cli
