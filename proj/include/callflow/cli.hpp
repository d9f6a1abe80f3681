#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace callflow {

enum ExitCode : int {
    kExitOk = 0,
    kExitInputError = 1,
    kExitSuiteFailure = 2,
    kExitNotReachable = 3,
    kExitNonConvergence = 4,
};

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace callflow
