#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace latfront {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConvergence = 2,
  kExitHyperbolicity = 3,
  kExitConfig = 4,
  kExitKernel = 5,
};

// args excludes the program name. Summary on `out`, structured JSON errors on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latfront
