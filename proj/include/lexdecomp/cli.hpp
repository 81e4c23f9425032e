#ifndef LEXDECOMP_CLI_HPP
#define LEXDECOMP_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace lexdecomp {

// Entry point behind the lexdecomp binary. Subcommands: train, eval,
// predict, inspect, ablate. Returns the process exit code: 0 success,
// 1 runtime failure, 2 usage/config error. Errors are a single
// machine-parseable line on err.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace lexdecomp

#endif
