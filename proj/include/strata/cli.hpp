#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace strata::cli {

enum ExitCode { Ok = 0, Usage = 1, Ambiguous = 2 };

/// `args` excludes the program name. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// STRATA_TOL if set (must lie in (0, 1)), else the library default.
double default_tolerance();

} // namespace strata::cli
