#pragma once

#include <filesystem>

#include "semiflow/dtn.hpp"
#include "semiflow/estimates.hpp"

namespace semiflow {

/// Malformed or inconsistent scenario configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DumpStates { none, final, all };

struct RunOptions {
  std::filesystem::path out_dir;
  unsigned seed = 0;  // default seed for randomized catalog entries
  std::map<std::string, double> slack_overrides;
  DumpStates dump = DumpStates::none;
  // when nonempty, the config's mode must match (config error otherwise)
  std::string expected_mode;
};

struct ScenarioResult {
  // 0 = all estimates pass, 1 = estimate failure, 2 = config error,
  // 3 = solver failure
  int exit_code = 0;
  std::string name;
  std::string message;
  EstimateReport report;
  std::vector<std::filesystem::path> artifacts;
};

/// Parses, validates, runs, and writes artifacts for a single scenario
/// config (JSON). Never throws for the documented failure modes; the exit
/// code carries the verdict.
ScenarioResult run_scenario(const std::filesystem::path& config,
                            const RunOptions& opt);

/// Runs every scenario listed in a suite manifest (JSON array of
/// {config, expect}); prints one summary line per scenario. Exit 0 iff
/// every scenario produced its expected exit code.
ScenarioResult run_suite(const std::filesystem::path& manifest,
                         const RunOptions& opt);

// Serialization helpers (atomic write-then-rename, deterministic digits).
void write_grid_function_csv(const std::filesystem::path& path,
                             const GridFunction& u);
void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& tr);
void write_boundary_trajectory_csv(const std::filesystem::path& path,
                                   const BoundaryTrajectory& tr);
void write_report_json(const std::filesystem::path& path,
                       const ScenarioResult& result);

}  // namespace semiflow
