#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hdqkd::cli {

// Batch front end. `args` excludes the program name. Returns the process
// exit code; diagnostics go to `err`, reports and un-redirected CSV to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hdqkd::cli
