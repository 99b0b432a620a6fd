#pragma once

#include <filesystem>
#include <iostream>

#include "pdae/verify.hpp"

namespace pdae {

/// Process exit codes of the `pdae` tool.
enum ExitCode : int {
  kExitSuccess = 0,
  kExitConfigError = 1,
  kExitCheckFailed = 2,
  kExitBlowup = 3,
};

/// Writes trajectory.csv and summary.json. 0 on completion, 3 on blow-up, 1 on bad input.
int cmd_solve(const std::filesystem::path& config_path, const std::filesystem::path& output_dir,
              std::ostream& diag = std::cerr);

/// Writes verify.json. 0 iff every check passes, 2 otherwise, 1 on bad input.
int cmd_verify(const std::filesystem::path& config_path, const std::filesystem::path& output_dir,
               const VerifyHooks& hooks = {}, std::ostream& diag = std::cerr);

/// Writes converge.csv. 0 iff every observed order lies in its bracket, 2 otherwise.
int cmd_converge(const std::filesystem::path& config_path, const std::filesystem::path& output_dir,
                 std::ostream& diag = std::cerr);

}  // namespace pdae
