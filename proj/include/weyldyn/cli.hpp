#pragma once

#include <string>
#include <vector>

namespace weyldyn {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 1,
    exit_no_convergence = 2,
    exit_region = 3,
    exit_acceptance = 4,
};

/// weyldyn {kernel|weyl|validate} [--config PATH] [--out DIR] [--force] [--threads N] [--tol X]
int run_cli(int argc, char** argv);
/// Same, with args[0] the program name.
int run_cli(const std::vector<std::string>& args);

} // namespace weyldyn
