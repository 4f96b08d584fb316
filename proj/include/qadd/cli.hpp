#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qadd {

/// Run the command-line interface on the given arguments (program name
/// excluded), writing results to out and diagnostics to err. Returns the
/// process exit code: 0 success, 1 numeric or internal failure, 2 bad input
/// or usage.
int cli_dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace qadd
