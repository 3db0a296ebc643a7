#pragma once

#include <iosfwd>

namespace ssc {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInputError = 1, kExitInvariant = 2 };

/// Entry point of the `ssc` tool; reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ssc
