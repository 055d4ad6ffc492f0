#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rydpmp {

enum ExitCode : int {
    kExitOk = 0,
    kExitError = 1,
    kExitOptimizationFailed = 2,
    kExitVerificationFailed = 3,
    kExitConfigError = 4,
};

/// Entry point of the pmp_pulse tool. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rydpmp
