#ifndef NEWSTAG_TOOLS_CLI_HPP
#define NEWSTAG_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace newstag::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int { ok = 0, validation_error = 1, data_error = 2 };

/// Runs one invocation; `args` excludes the program name. Errors are written
/// to `err` as a single JSON line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace newstag::cli

#endif  // NEWSTAG_TOOLS_CLI_HPP
