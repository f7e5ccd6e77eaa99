#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace homi::cli {

/// Runs one command line (without the program name). Returns the process
/// exit code: 0 success, 1 usage error, 2 data error, 3 numerical failure.
/// Failures print a single line starting with "error:" to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace homi::cli
