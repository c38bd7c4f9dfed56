#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jetforge {

// Runs one command-line invocation.  `argv` holds the arguments without the
// program name.  Results go to `out`, diagnostics to `err`.  Returns the
// process exit status: 0 on success (including negative decisions such as
// "not conjugate"), 1 on a mathematical refusal, 2 on a usage error.
int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

} // namespace jetforge
