// Command-line front end, separated from main() so tests can drive it
// in-process with captured streams.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nmbr9::cli {

// Exit codes. `kLimited` marks a run that ended on a node or time budget
// (or a playout, which proves nothing) rather than with a proof.
inline constexpr int kExitOk = 0;
inline constexpr int kExitLimited = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInstance = 65;

// Runs one invocation. `args` excludes the program name. Everything the
// process would print goes to `out` / `err`; the return value is the
// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nmbr9::cli
