#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace repvote {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 2,
  kExitInvariantViolation = 3,
  kExitUnknownFlag = 4,
  kExitMissingRequired = 5,
  kExitMalformedValue = 6,
};

/// Runs one `repvote` command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace repvote
