#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ltd::cli {

enum ExitCode : int { kTrue = 0, kFalse = 1, kBadInput = 2 };

/// Runs one `ltd` invocation. `args` excludes the program name. Results go to
/// `out` (or the file named by -o), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ltd::cli
