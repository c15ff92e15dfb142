#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relcons::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kVerifyFailed = 3,
};

/// Runs one invocation. `args` excludes the program name. Primary output is
/// buffered and written to `out` only when the command succeeds (or when
/// verify completes with failures); diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace relcons::cli
