#pragma once

#include <iosfwd>

namespace trigfit::cli
{

inline constexpr const char* tool_version = "1.0.0";

enum ExitCode : int
{
    Ok = 0,
    ParseFailure = 2,
    NotConverged = 3,
    NumericalFailure = 4,
};

/// Runs one command line (argv[0] is the program name). Reports go to `out`
/// as key=value lines; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace trigfit::cli
