#pragma once

#include <string>
#include <vector>

namespace scfw::app {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kNonconvergence = 2,
  kConfigError = 3,
  kIoError = 4,
};

/// Entry point of the command-line tool; returns the process exit status.
int run(int argc, const char* const* argv);

/// Same, with argv[0] supplied.
int run(const std::vector<std::string>& args);

}  // namespace scfw::app
