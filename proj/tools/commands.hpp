#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bhattbayes::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kNumeric = 3,
  kNotConverged = 4,
};

/// Environment variable naming a default output directory; --output wins.
inline constexpr const char* kOutputDirEnv = "BHATTBAYES_OUTPUT_DIR";

/// Parses argv (argv[0] is the program name) and runs one subcommand.
/// Primary output goes to `out` unless redirected to a file; diagnostics
/// go to `err`. Returns the process exit code.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace bhattbayes::cli
