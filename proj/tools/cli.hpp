#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace patrol::cli {

// Runs one subcommand.  Exit codes: 0 success, 1 validation or usage error,
// 2 infeasible instance or size-cap violation.  `args` excludes the program
// name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace patrol::cli
