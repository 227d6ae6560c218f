#pragma once

#include <string>
#include <vector>

namespace ccn {

/// Command-line entry point shared by the ccn tool and the tests.
/// `args` excludes the program name. Returns the process exit status:
/// 0 on success or a passing check, 1 on a failing check, 2 on unusable
/// input or a usage error.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace ccn
