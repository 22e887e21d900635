#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cfsim::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kScenario = 2,
  kRuntime = 3,
};

// args excludes the program name.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfsim::cli
