#pragma once

// The qsd command-line front end, callable in-process so tests can drive it
// without spawning a shell.

#include <iosfwd>
#include <string>
#include <vector>

namespace qsd::cli {

/// Exit codes: 0 success, 1 computation error (an error record is written to
/// `err` as one JSON line), 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace qsd::cli
