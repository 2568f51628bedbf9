#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace liouville::cli {

/// Runs one command line (arguments after the program name). Results go to
/// --out when given, otherwise to `out`; diagnostics go to `err`.
/// Returns 0 on success, 2 when a verdict is Inconclusive and 1 on errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liouville::cli
