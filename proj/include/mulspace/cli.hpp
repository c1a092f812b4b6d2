#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mulspace::cli {

/// Runs one command line (without the program name) against the given
/// streams.  Returns the process exit code:
///   0   success, JSON or CSV report on `out`
///   2   validation error, {"error", "field"} JSON on `err`
///   64  unknown or missing subcommand
///   74  file I/O failure
/// Tests call this in-process; main() forwards to it.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mulspace::cli
