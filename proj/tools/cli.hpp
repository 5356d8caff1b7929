// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "codecarta/error.hpp"

namespace codecarta::cli {

/// Process exit status for each error category; 0 is success and 1 an
/// unexpected internal failure.
int exit_code(ErrorCode code) noexcept;

/// Runs one command line (args[0] is the program name). Human-readable
/// progress goes to `out`; failures print a single JSON object line to
/// `err`: {"error": {"code", "exitCode", "step", "message"[, "position"]}}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace codecarta::cli
