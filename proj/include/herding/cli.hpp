#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace herding {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitPropertyFailure = 1,
  kExitInvalidInput = 2,
  kExitIoError = 3,
};

/// Environment variable mirroring --workers; the flag wins when both are set.
inline constexpr const char* kWorkersEnv = "HERDING_WORKERS";

inline constexpr const char* kCsvHeader = "upsilon,rho,n,paths,method,scaling,estimate,stderr,seed";

/// Runs `herding <args...>` (args excludes the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace herding
