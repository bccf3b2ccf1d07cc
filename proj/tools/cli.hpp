#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace klab::cli {

enum ExitCode : int { kPass = 0, kVerificationFailed = 1, kUsageError = 2, kNumericalFailure = 3 };

/// Entry point of koopman-lab. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace klab::cli
