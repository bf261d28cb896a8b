#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace partialrank {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,     ///< bad flags, validation or parse errors
    kExitInternal = 2,  ///< internal invariant violation
};

/// Runs the CLI on `args` (without the program name). Output that is not
/// redirected with --output goes to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
/// Same, with `--input -` reading from `in` instead of standard input.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace partialrank
