#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aesimc::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
// metrics --check found printed values outside tolerance.
inline constexpr int kCheckMismatch = 2;

// Runs the command line `args` (without the program name). Data goes to
// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aesimc::cli
