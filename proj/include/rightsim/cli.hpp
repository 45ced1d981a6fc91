#ifndef RIGHTSIM_CLI_HPP
#define RIGHTSIM_CLI_HPP

#include <iosfwd>

namespace rightsim {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitFlagged = 3,
  kExitIo = 4,
};

/// Entry point of the `rightsim` tool: simulate, sweep, phase-sweep,
/// energy-barrier and validate-config. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rightsim

#endif  // RIGHTSIM_CLI_HPP
