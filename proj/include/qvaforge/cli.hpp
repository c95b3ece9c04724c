#pragma once

#include <string>
#include <vector>

namespace qvaforge::cli {

struct CliResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

/// Runs one qva-forge command. Exit codes: 0 success / checks pass,
/// 1 check failure, 2 input error.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace qvaforge::cli
