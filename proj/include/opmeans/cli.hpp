#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opmeans {

// Exit statuses of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRegression = 1;
inline constexpr int kExitFormat = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitBudget = 4;
inline constexpr int kExitUsage = 64;

// args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opmeans
