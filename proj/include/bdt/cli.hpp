#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bdt {

// Exit codes of the bdt tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;  // a plan or experiment assertion failed
inline constexpr int kExitUsage = 2;      // bad flags or invalid parameters
inline constexpr int kExitInput = 3;      // unreadable or malformed input files

// Runs one subcommand. args excludes the program name. Machine-readable
// output goes to out (or --out), diagnostics to err.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace bdt
