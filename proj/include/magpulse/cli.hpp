#pragma once

#include <ostream>

namespace magpulse::cli {

// Exit codes are a stable contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;      // output could not be written
inline constexpr int kExitConfig = 2;  // usage, config, or malformed input
inline constexpr int kExitDomain = 3;  // numeric or domain failure

/// Entry point behind the magpulse executable; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace magpulse::cli
