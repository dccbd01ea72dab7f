#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tickforge {

// Exit codes: 0 success or property holds, 1 property fails, 2 usage or
// input error, 3 resource budget exhausted.
inline constexpr int kExitHolds = 0;
inline constexpr int kExitFails = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitExhausted = 3;

// `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace tickforge
