#pragma once

#include <ostream>

namespace varorder::cli {

inline constexpr int kExitPositive = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInternal = 3;

/// Parses argv, runs one subcommand and writes its JSON report to `out`.
/// Diagnostics go to `err`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace varorder::cli
