#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace swarm_lssvm {

/// Exit statuses of the command-line tool.
enum ExitStatus : int { kExitOk = 0, kExitInputError = 1, kExitNumericalError = 2 };

/// Runs one command line. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

} // namespace swarm_lssvm
