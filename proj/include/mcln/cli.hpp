#ifndef MCLN_CLI_HPP
#define MCLN_CLI_HPP

#include <iosfwd>

namespace mcln {

// Exit statuses of the `mcln` tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_verify_failed = 1,
    exit_usage = 2,
    exit_config = 3,
    exit_invalid_input = 4,
    exit_numeric = 5,
    exit_degenerate = 6,
    exit_design = 7,
    exit_io = 8,
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mcln

#endif
