#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace abcd::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kIo = 3 };

struct Env {
  /// Executable used to spawn the peer endpoint in `netsim --driver`.
  std::string self_exe;
};

/// args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const Env& env = {});

}  // namespace abcd::cli
