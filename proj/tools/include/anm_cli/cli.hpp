#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace anm::cli {

enum ExitCode : int { ok = 0, usage_error = 1, input_error = 2, runtime_failure = 3 };

/// Runs the anm command line (args excludes the program name). Normal output
/// goes to `out`, diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace anm::cli
