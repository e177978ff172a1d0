#pragma once

#include <string>
#include <vector>

namespace mtssel::cli {

/// Entry point for `mts_select`. Returns 0 on success, 1 on input or usage
/// errors, 2 on internal-consistency errors. Diagnostics go to stderr.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args); // args[0] is the program name

} // namespace mtssel::cli
