#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hermite::cli {

// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kConvergence = 3,
  kPropertyViolation = 4,
  kBandViolation = 5,
  kGoldenMismatch = 6,
};

// Runs one command line (without the program name). Reports go to `out` unless
// --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Shortest decimal that round-trips to the same double; "inf", "-inf", "nan"
// for non-finite values.
std::string format_number(double v);

}  // namespace hermite::cli
