#pragma once

// Command-line front end. `run` is the whole program minus process I/O, so
// tests can drive it in-process.

#include <string>
#include <vector>

namespace dstab::cli {

enum ExitCode : int { ok = 0, hypothesis_failure = 1, input_error = 2, indeterminate = 3 };

struct Result {
  int exit_code = ok;
  std::string out;  // report document (empty when written to --output or on error)
  std::string err;  // JSON error object {"error": {"code", "message"}} or help text
};

/// args excludes the program name, e.g. {"afrak", "--ell", "31", "--p", "3"}.
Result run(const std::vector<std::string>& args);

}  // namespace dstab::cli
