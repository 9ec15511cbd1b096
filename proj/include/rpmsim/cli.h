#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rpm::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kValidation = 3,
    kIo = 4,
    kFormat = 5,
};

/// Entry point of the `rpmsim` tool; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rpm::cli
