#ifndef WCS_CLI_HPP
#define WCS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace wcs {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitModelInvalid = 3,
  kExitZeroEvidence = 4,
  kExitWidthGuard = 5,
  kExitTrapped = 6,
};

// Runs the command line `args` (without the program name). Primary output
// goes to `out` unless --out names a file; diagnostics and the one-line
// `error <kind>: <message>` record go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wcs

#endif  // WCS_CLI_HPP
