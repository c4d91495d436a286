#pragma once

#include <ostream>

namespace santalo::cli {

enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,  ///< a property or acceptance check failed
    kUsage = 2,        ///< bad flags, bad input, or a solver failure
};

/// Parses argv and runs one subcommand; output that is not redirected with
/// --out goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace santalo::cli
