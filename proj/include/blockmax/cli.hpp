#pragma once

// Command-line front end. Kept in the library so tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace blockmax::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericError = 3, kIoError = 4 };

/// args excludes the program name. Normal output goes to out unless a command
/// is given --out; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blockmax::cli
