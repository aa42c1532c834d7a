#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sla {

// Runs one command line (args excludes the program name). Returns 0 on
// success, 1 when diagnostics were found and 2 on usage or IO errors.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace sla
