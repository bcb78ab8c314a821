#pragma once

// Batch orchestration behind the command-line tool: preflight validity
// checks and run-to-directory with trajectory.csv, summary.json and config.json.

#include <attsync/scenario_config.hpp>
#include <attsync/simulator.hpp>

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace attsync {

struct ValidityReport {
  Mode mode = Mode::leaderless;
  bool has_spanning_tree = false;
  bool leaderless_valid = false;
  /// Present when the topology carries leader weights.
  std::optional<bool> leader_rooted_valid;
  std::vector<int> in_degrees;
  /// Every problem found, including those unrelated to the graph.
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
};

ValidityReport validate(const ScenarioConfig& config);
nlohmann::json to_json(const ValidityReport& report);

struct RunSummary {
  RunMetrics metrics;
  ValidityReport validity;
  double wall_clock_seconds = 0.0;
  std::size_t steps = 0;
  std::size_t records = 0;
  /// Guard outcome: final synchronization (or tracking) errors below tolerance.
  bool converged = false;
  nlohmann::json config;
};

nlohmann::json to_json(const RunSummary& summary);

/// True when the final position- and velocity-level errors of the mode are below tolerance.
bool converged(const RunMetrics& m, Mode mode, double tolerance);

/// Validates, simulates and writes trajectory.csv, summary.json and
/// config.json into out_dir (created if needed). Throws ConfigError for an
/// invalid scenario and DivergenceError on blow-up.
RunSummary run_to_directory(const ScenarioConfig& config, const std::filesystem::path& out_dir);

}  // namespace attsync
