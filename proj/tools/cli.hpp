#pragma once

#include <string>
#include <vector>

namespace socrhythm::cli {

enum ExitCode : int { kOk = 0, kRuntime = 1, kUsage = 2 };

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace socrhythm::cli
