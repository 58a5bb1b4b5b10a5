#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

namespace zmc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitToleranceFailure = 1,
  kExitUsage = 2,
};

// Entry point of the `zmc` tool. JSON goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Copy of `j` with every non-finite number replaced by null. Inside objects a
// sibling "<key>_reason" explains the replacement.
nlohmann::json finite_json(const nlohmann::json& j);

// ZMC_OUTPUT_DIR when set, otherwise the current directory.
std::string output_dir();

}  // namespace zmc::cli
