#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nfp::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kNumeric = 4 };

/// Runs the tool on `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nfp::cli
