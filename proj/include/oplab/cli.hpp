#pragma once

#include <string>
#include <vector>

#include "oplab/spaces.hpp"

namespace oplab::cli {

// Space string used by flags: "p=<decimal|inf>;blocks=<n1>,<n2>,...".
SpaceSpec parse_space(const std::string& s);

// Executes one subcommand (opnorm | tong | chain | verify).
// Exit codes: 0 success / no violations, 1 suite violations, 2 usage or
// input error.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace oplab::cli
