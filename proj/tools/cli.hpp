#pragma once

#include <iosfwd>

namespace magicpol::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kUsage = 2;   // usage or validation error
inline constexpr int kDomain = 3;  // physics-domain error

/// Runs the command line; output CSV goes to --out or `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace magicpol::cli
