#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hypconf::cli {

// Exit codes shared by all subcommands.
enum Exit : int {
    kOk = 0,
    kNo = 1,
    kInvalid = 2,
    kFlipCap = 3,
    kDiverged = 4,
};

// Runs one command line (args[0] is the program name) and returns the exit
// code; output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypconf::cli
