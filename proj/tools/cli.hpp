#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vlambda::cli {

/// Exit codes of the vlambda command.
enum ExitCode : int {
    ok = 0,
    failure = 1,
    usage = 2,
    not_a_value = 3,
    out_of_range = 4,
    corrupt_series = 5,
};

/// Runs the command line; data records go to `out`, diagnostics to `err`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace vlambda::cli
