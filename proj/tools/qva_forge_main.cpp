#include <cstdio>
#include <string>
#include <vector>

#include "qvaforge/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    qvaforge::cli::CliResult res = qvaforge::cli::run_cli(args);
    if (!res.out.empty()) std::fputs(res.out.c_str(), stdout);
    if (!res.err.empty()) std::fputs(res.err.c_str(), stderr);
    return res.exit_code;
}
