#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace herdsim {

// Runs one CLI invocation. Returns the process exit code:
// 0 success, 1 validation/condition/computation failure, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace herdsim
