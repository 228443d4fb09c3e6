#pragma once

#include <ostream>
#include <span>
#include <string>

namespace superfid {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudgetExhausted = 3;

/// Runs the command line `args` (without the program name). Data goes to
/// `out` unless --out is given; diagnostics go to `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace superfid
