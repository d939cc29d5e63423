#pragma once

#include <ostream>

namespace pulseqsdc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitAbort = 3;
inline constexpr int kExitNumerical = 4;

/// Entry point of the `pulseqsdc` tool. Never throws; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pulseqsdc::cli
