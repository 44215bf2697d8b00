#pragma once

#include <ostream>

namespace wsc {

/// Exit statuses of the command-line tool.
enum ExitStatus : int {
  exit_ok = 0,
  exit_invalid = 1,        ///< bad arguments, unreadable or invalid input
  exit_not_converged = 2,  ///< outputs written, but a solver flagged non-convergence
};

/// Entry point of the `wsc` tool. Results go to files (or `out` when no output
/// path is given); failures print a single-line error JSON to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wsc
