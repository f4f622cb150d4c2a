#pragma once

#include <string>
#include <vector>

namespace lcc {

// Exit codes: 0 success, 1 validation or usage failure, 2 budget exceeded.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace lcc
