#pragma once

#include <iosfwd>

namespace gmatch {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitUsage = 2 };

/// Runs the `gmatch` command line. Results go to `out` (or the --out file);
/// diagnostics and progress go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gmatch
