#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace feeloc {

// Runs one subcommand; `args` excludes the program name. Returns 0 on
// success, 1 on validation errors (error JSON on `err`), 2 on bad usage.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace feeloc
