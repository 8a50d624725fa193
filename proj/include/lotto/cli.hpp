#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lotto::cli {

// Runs the command-line tool on the given argument list (without argv[0])
// and streams results to out / diagnostics to err. Returns the process
// exit code: 0 success, 1 invalid input, 2 solver failure, 3 verification
// checks failed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lotto::cli
