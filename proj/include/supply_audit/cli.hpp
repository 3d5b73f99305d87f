#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace supply_audit::cli {

enum ExitCode : int {
  kClean = 0,
  kFindings = 1,
  kUsageOrIo = 2,
};

// args[0] is the program name. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace supply_audit::cli
