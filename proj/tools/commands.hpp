#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qcoin/errors.hpp"

namespace qcoin::cli {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kOutDirEnv = "QCOIN_OUT_DIR";

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitCheckFailed = 3,
  kExitFitFailed = 4,
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunOptions {
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;  // overrides the config seed
  bool paper_params = false;
  // Test hook for oracle-check: perturbs one circuit amplitude by 1e-6.
  bool inject_fault = false;
};

struct CommandResult {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;
  nlohmann::json report;
};

const std::vector<std::string>& command_names();

// Accepts either a bare command record or a file holding one top-level record
// per command, e.g. {"futures": {...}}.
nlohmann::json select_command_config(const nlohmann::json& file, std::string_view command);
nlohmann::json load_config(const std::filesystem::path& path, std::string_view command);

// FNV-1a 64 over the canonical (sorted-key) JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

std::filesystem::path default_out_dir();

CommandResult cmd_futures(const nlohmann::json& config, const RunOptions& options);
CommandResult cmd_complexity_sweep(const nlohmann::json& config, const RunOptions& options);
CommandResult cmd_hom_dip(const nlohmann::json& config, const RunOptions& options);
CommandResult cmd_compare_sweep(const nlohmann::json& config, const RunOptions& options);
CommandResult cmd_oracle_check(const nlohmann::json& config, const RunOptions& options);
CommandResult cmd_counts(const nlohmann::json& config, const RunOptions& options);

// Dispatches by subcommand name and maps library errors onto exit codes.
CommandResult run_command(std::string_view command, const nlohmann::json& config,
                          const RunOptions& options);

}  // namespace qcoin::cli
