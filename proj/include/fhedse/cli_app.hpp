// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fhedse {

/// Runs the command-line front end. `args` excludes the program name.
/// Returns the process exit status: 0 success, 1 validation or check
/// failure, 2 I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fhedse
