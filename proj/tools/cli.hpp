#pragma once

#include <iosfwd>
#include <string_view>

namespace nptsub::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;  // verification or property failure
inline constexpr int kUsage = 2;   // bad arguments, unreadable or unwritable files
inline constexpr int kNoConvergence = 3;

// Runs one command line (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nptsub::cli
