#pragma once

// Command-line front end: solve, classify, sweep, profile.
// Exit codes: 0 success, 2 solver hit max iterations, 1 error.

#include <iosfwd>
#include <string>
#include <vector>

namespace ldg::cli {

int run(int argc, const char* const* argv);
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ldg::cli
