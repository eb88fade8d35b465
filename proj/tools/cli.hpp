#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cmlsat::cli {

enum Exit { Sat = 0, Unsat = 1, Error = 2, Caveat = 3 };

// Runs one command line (argv[0] is the program name). Output goes to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cmlsat::cli
