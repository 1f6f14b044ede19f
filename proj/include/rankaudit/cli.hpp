#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rankaudit {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  // bad flags, config, data or parameters
inline constexpr int kExitIo = 2;     // unreadable input, unwritable output

// Runs the rankaudit command line. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rankaudit
