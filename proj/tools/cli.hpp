#pragma once

#include <string>
#include <vector>

namespace accesswalk::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidInput = 1,
    kInternalFailure = 2,
    kBudgetExceeded = 3,
};

/// Entry point of the `accesswalk` tool: compute, oracle, scenario, serve.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace accesswalk::cli
