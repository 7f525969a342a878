#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bcov::cli {

// Exit codes: 0 success, 1 computation failure or failed assertion, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bcov::cli
