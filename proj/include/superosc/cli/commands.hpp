#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "superosc/cli/config.hpp"
#include "superosc/cli/table.hpp"

namespace superosc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitDomain = 3,
  kExitTolerance = 4,
};

/// Command-line flags; each one, when given, replaces the config value.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<double> tol;
};

void apply_overrides(RunConfig& cfg, const Overrides& o);

struct CommandResult {
  Table table;
  nlohmann::json meta = nlohmann::json::object();
  /// Human-readable tolerance violations; non-empty means exit code 4.
  std::vector<std::string> breaches;
};

CommandResult run_sequence(const RunConfig& cfg);
CommandResult run_evolve(const RunConfig& cfg);
CommandResult run_singularity(const RunConfig& cfg);
CommandResult run_persistence(const RunConfig& cfg);
CommandResult execute(const RunConfig& cfg);

/// Writes the table (and, for CSV files, a `<path>.meta.json` sidecar).
void write_result(const RunConfig& cfg, const CommandResult& result, std::ostream& out);

/// Load, override, execute and write; maps failures to exit codes and
/// reports them on `err`.
int run_cli(const std::string& command, const std::string& config_path,
            const Overrides& overrides, std::ostream& out, std::ostream& err);

}  // namespace superosc::cli
