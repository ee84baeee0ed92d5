#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace recurdim {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitUsage = 2, kExitNumeric = 3 };

/// Runs one command line (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace recurdim
