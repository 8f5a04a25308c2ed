#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ttforge::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kVerificationFailure = 2 };

/// Runs `ttforge <command> ...` with args excluding the program name.
/// Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Applies TTFORGE_LOG (trace, debug, info, warn, error, off) to the logger.
void configure_logging();

}  // namespace ttforge::cli
