// Command-line front end.  The executable is a thin wrapper around run() so
// that tests can drive every command in-process.
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ostro/fourier.hpp"

namespace ostro::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kValidation = 2,
  kSolverFailure = 3,
  kBlowUp = 4,
};

/// Environment variable overriding the output directory.
inline constexpr const char* kOutputDirEnv = "OSTRO_OUTPUT_DIR";

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

struct ProfileFile {
  WaveProfile profile;
  std::map<std::string, std::string> header;  // from "# key = value" lines
};

/// Reads "x value" lines over one period starting at x = -π.
ProfileFile read_profile(const std::string& path);

/// Writes a profile with "# key = value" header lines.
void write_profile(const std::string& path, const WaveProfile& phi,
                   const std::vector<std::pair<std::string, std::string>>& header);

}  // namespace ostro::cli
