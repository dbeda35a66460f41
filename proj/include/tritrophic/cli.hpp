#pragma once

#include <iosfwd>

namespace tritrophic {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Entry point of the command-line tool. argv[0] is the program name and
/// argv[1] the subcommand. Without --out the CSV tables go to `out`;
/// with --out they are written as files and `out` gets a short summary.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace tritrophic
