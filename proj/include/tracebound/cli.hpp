#pragma once

#include <ostream>

namespace tracebound {

inline constexpr int kExitOk = 0;
inline constexpr int kExitClaimFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitConvergenceError = 3;

/// The tracebound command line. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace tracebound
