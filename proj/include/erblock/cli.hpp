#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace erblock::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParse = 2,
  kValidation = 3,
  kLearnerFailure = 4,
  kCapacity = 5,
};

/// Runs one command line (args[0] is the program name) and returns the exit
/// code. Messages go to `out`, errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace erblock::cli
