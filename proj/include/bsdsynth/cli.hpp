#pragma once

#include <iosfwd>

namespace bsdsynth {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitMismatch = 1,    // verification found a difference
  kExitUsage = 2,       // bad arguments, configuration or file format
  kExitCapability = 3,  // mode cap, oracle protocol, probe budget
  kExitState = 4,       // design not in the required state
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bsdsynth
