#pragma once

#include <ostream>

namespace gbsmock::cli {

/// Runs the command line. Returns 0 on success, 1 on runtime failure and 2 on
/// usage errors.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace gbsmock::cli
