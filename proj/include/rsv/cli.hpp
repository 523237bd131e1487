#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rsv {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitNoConvergence = 4;
constexpr int kExitVerification = 5;

// Runs the command line `args` (args[0] is the program name). Reports go to
// `out` unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsv
