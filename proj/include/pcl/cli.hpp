#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcl {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDecodeFailure = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitGuardRail = 3;
inline constexpr int kExitAuditFailure = 4;

// Subcommands: simulate, audit, tradeoff, gap.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcl
