#pragma once

#include <string>
#include <vector>

namespace sibm::cli {

// Parses and dispatches one invocation. Returns 0 when every verdict passed,
// 1 on a failed verdict or runtime error, 2 on a usage error. Reports embed
// the fully resolved configuration and seed, so any run can be replayed
// bit-exactly from its own output.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace sibm::cli
