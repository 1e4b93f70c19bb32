#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hah::cli {

/// Runs one hahtool command; args exclude the program name.
/// Returns 0 on success, 1 on a mathematical obstruction or failed check,
/// 2 on an input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hah::cli
