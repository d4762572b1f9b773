#pragma once

#include "drivensys/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace drivensys {

/// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;  // refuted, bounded-away, not singleton
inline constexpr int kExitInconclusive = 3;

struct CommandResult {
  int exit_code = kExitOk;
  /// One-line human summary for the terminal.
  std::string summary;
  std::vector<std::filesystem::path> files;
};

// Each command writes its files under config.out_dir. Outputs depend only on
// the config, never on the thread count.
CommandResult cmd_certify(const RunConfig& config);
CommandResult cmd_uap(const RunConfig& config);
CommandResult cmd_encode(const RunConfig& config);
CommandResult cmd_conjugacy(const RunConfig& config);
CommandResult cmd_takens(const RunConfig& config);
CommandResult cmd_girst(const RunConfig& config);
CommandResult cmd_figure1(const RunConfig& config);
CommandResult cmd_reachable(const RunConfig& config);

/// Dispatch by subcommand name.
CommandResult run_command(const std::string& name, const RunConfig& config);

}  // namespace drivensys
