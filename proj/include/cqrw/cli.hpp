#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cqrw {

/// Exit codes of the cqrw tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitAbsent = 1,  // NONE from rewrite, FAIL from verify
  kExitInput = 2,
  kExitLimit = 3,
  kExitClass = 4,
  kExitInternal = 5,
};

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cqrw
