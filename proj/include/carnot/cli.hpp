#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace carnot {

/// Runs the command line front end. Returns 0 on success, 1 on a computation
/// error and 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace carnot
