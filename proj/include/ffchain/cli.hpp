#pragma once

#include <string>
#include <vector>

namespace ffchain {

/// Exit codes: 0 ok, 1 parse, 2 genericity/precondition, 3 solver,
/// 4 integrator, 5 fit.
int run_cli(const std::vector<std::string>& args);

} // namespace ffchain
