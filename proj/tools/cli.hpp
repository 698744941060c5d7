#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sarinf::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;
inline constexpr int kNumericalError = 2;

/// Runs the command line `args` (without the program name). Messages go to
/// `out` / `err`; files are written only when the command succeeds.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sarinf::cli
