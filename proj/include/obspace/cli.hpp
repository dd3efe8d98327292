#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace obspace {

// Entry point behind the obspace binary. `args` excludes the program name;
// `in` backs the "-" convention for document arguments. Exit codes: 0 for a
// positive finding, 1 for a negative one (inconsistent space, infeasible
// nonnegativity, no rigid selection), 2 for usage, parse or data errors.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace obspace
