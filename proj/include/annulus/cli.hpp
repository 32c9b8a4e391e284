#pragma once

#include <iosfwd>

namespace annulus::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kBelowCritical = 2,
  kVerificationFailed = 3,
};

/// Runs `annulus <command> [flags]` and returns the process exit code.
/// Results go to `out` (or the --out file), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace annulus::cli
