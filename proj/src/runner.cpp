#include <attsync/errors.hpp>
#include <attsync/runner.hpp>
#include <attsync/trajectory_io.hpp>

#include <chrono>
#include <fstream>

namespace attsync {

ValidityReport validate(const ScenarioConfig& config) {
  ValidityReport r;
  r.mode = config.mode;
  Scenario scenario;
  try {
    scenario = build_scenario(config);
  } catch (const ConfigError& e) {
    r.problems.push_back(e.what());
    return r;
  }
  const CommTopology& topo = scenario.topology;
  r.in_degrees = in_degrees(topo);
  r.has_spanning_tree = has_directed_spanning_tree(topo);
  r.leaderless_valid = leaderless_valid(topo);
  if (topo.has_leader()) r.leader_rooted_valid = leader_rooted_valid(topo);
  r.problems = scenario_diagnostics(scenario);
  return r;
}

nlohmann::json to_json(const ValidityReport& r) {
  nlohmann::json j;
  j["mode"] = to_string(r.mode);
  j["valid"] = r.ok();
  j["has_directed_spanning_tree"] = r.has_spanning_tree;
  j["leaderless_valid"] = r.leaderless_valid;
  j["leader_rooted_valid"] =
      r.leader_rooted_valid ? nlohmann::json(*r.leader_rooted_valid) : nlohmann::json(nullptr);
  j["in_degrees"] = r.in_degrees;
  j["problems"] = r.problems;
  return j;
}

bool converged(const RunMetrics& m, Mode mode, double tolerance) {
  if (mode == Mode::tracking) {
    return m.final_tracking_error < tolerance && m.final_velocity_tracking_error < tolerance;
  }
  return m.final_disagreement < tolerance && m.final_velocity_disagreement < tolerance;
}

nlohmann::json to_json(const RunSummary& s) {
  nlohmann::json j;
  j["metrics"] = metrics_json(s.metrics);
  j["validity"] = to_json(s.validity);
  j["wall_clock_seconds"] = s.wall_clock_seconds;
  j["steps"] = s.steps;
  j["records"] = s.records;
  j["converged"] = s.converged;
  j["config"] = s.config;
  return j;
}

RunSummary run_to_directory(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
  RunSummary summary;
  summary.validity = validate(config);
  summary.config = to_json(config);
  if (!summary.validity.ok()) {
    std::string msg = "invalid scenario:";
    for (const auto& p : summary.validity.problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  const Scenario scenario = build_scenario(config);

  const auto start = std::chrono::steady_clock::now();
  const TrajectoryLog log = run(scenario);
  summary.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  summary.metrics = metrics(log);
  summary.steps = log.steps;
  summary.records = log.records.size();
  summary.converged = converged(summary.metrics, config.mode, config.guard.tolerance);

  std::filesystem::create_directories(out_dir);
  {
    std::ofstream csv(out_dir / "trajectory.csv", std::ios::binary);
    if (!csv) throw ConfigError((out_dir / "trajectory.csv").string() + ": cannot write");
    write_trajectory_csv(csv, log);
  }
  {
    std::ofstream js(out_dir / "summary.json", std::ios::binary);
    js << to_json(summary).dump(2) << '\n';
  }
  {
    std::ofstream js(out_dir / "config.json", std::ios::binary);
    js << summary.config.dump(2) << '\n';
  }
  return summary;
}

}  // namespace attsync
