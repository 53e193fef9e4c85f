#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace netsync::cli {

/// Exit codes: 0 success or expected verdict, 1 domain failure, 2 usage or I/O failure.
enum ExitCode : int { kOk = 0, kDomainFailure = 1, kUsageFailure = 2 };

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netsync::cli
