#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ifslab/error.hpp"

namespace ifslab {

/// 0 success, 2 usage/validation/IO, 3 undetermined or inconclusive, 1 anything else.
int exit_code(ErrorCode code);

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ifslab
