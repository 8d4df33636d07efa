#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace taxalign::cli {

/// Runs the command line `args` (without the program name). Normal output
/// goes to `out`, diagnostics and warnings to `err`. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace taxalign::cli
