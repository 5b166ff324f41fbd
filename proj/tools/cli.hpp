#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace darija::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kInvariant = 3 };

/// Runs one invocation. `args` excludes the program name. Data and reports
/// go to `out` or to files named by flags; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace darija::cli
