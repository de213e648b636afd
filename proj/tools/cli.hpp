#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sweeporder::cli {

// Runs one CLI invocation. `args` excludes the program name. Returns the
// process exit code: 0 success, 1 usage or internal error, 2 invalid mesh,
// 3 cycle-related result (order/cycles found one, audit found none).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sweeporder::cli
