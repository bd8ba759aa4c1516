#pragma once

// Command-line front end: sample, gap and verify subcommands.

#include <iosfwd>

namespace rmtdec {

/// Exit codes: 0 ok, 1 identity failure, 2 configuration error, 3 runtime error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rmtdec
