// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rbm::cli {

enum ExitCode : int { ok = 0, argument_error = 2, numeric_error = 3 };

/// Runs one command line (without the program name). CSV goes to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rbm::cli
