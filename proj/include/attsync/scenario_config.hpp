#pragma once

// Declarative scenario files (JSON) and the built-in presets reproducing the
// six-spacecraft experiment.
//
// Schema (all keys except "spacecraft" and "adjacency" optional):
//
//   {
//     "mode": "leaderless" | "tracking",
//     "dt": 0.005, "duration": 40.0, "seed": 1, "shadow_switch": false,
//     "coupling": "lagged" | "exact" | "omitted",
//     "random_bounds": {"sigma": 0.5, "omega": 0.5},
//     "gains": {"lambda": 1.0, "k": 3.0, "gamma": 3.0},
//     "spacecraft": [
//       {"inertia": [J11, J12, J13, J22, J23, J33] | [[..],[..],[..]],
//        "initial": "random" | {"sigma": [..], "omega": [..]},
//        "theta_hat0": [6 values],
//        "gains": {...}}
//     ],
//     "adjacency": [[a11, ..., a1N], ...],
//     "leader_weights": [b1, ..., bN],
//     "reference": {"kind": "constant", "sigma": [..]}
//                | {"kind": "sinusoid", "amplitude": [..], "frequency": [..],
//                   "phase": [..], "offset": [..]},
//     "output": {"decimate": 10},
//     "guard": {"assert_converged": false, "tolerance": 0.01}
//   }
//
// Gains accept a scalar c meaning c * I (lambda, k) or c on every diagonal
// entry (gamma); lambda and k also accept a 3x3 array and gamma a 6-vector.

#include <attsync/simulator.hpp>

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace attsync {

struct SpacecraftConfig {
  Mat3d inertia = Mat3d::Identity();
  /// nullopt draws the initial state from the scenario seed.
  std::optional<SpacecraftStated> initial;
  ThetaVecd theta_hat0 = ThetaVecd::Zero();
  /// Overrides the scenario-wide gains when present.
  std::optional<GainSetd> gains;
};

struct ConvergenceGuard {
  bool assert_converged = false;
  double tolerance = 1e-2;
};

struct ScenarioConfig {
  Mode mode = Mode::leaderless;
  std::vector<SpacecraftConfig> spacecraft;
  Eigen::MatrixXd adjacency;
  std::optional<Eigen::VectorXd> leader_weights;
  GainSetd gains;
  ReferenceTrajectory reference;
  double dt = 0.005;
  double duration = 40.0;
  std::uint64_t seed = 1;
  double sigma_bound = 0.5;
  double omega_bound = 0.5;
  bool shadow_switch = false;
  AccelerationCoupling coupling = AccelerationCoupling::lagged;
  int decimate = 10;
  ConvergenceGuard guard;
};

/// Throws ConfigError whose message starts with the offending field path.
ScenarioConfig parse_config(const nlohmann::json& doc);
/// Throws ConfigError with line and column on malformed JSON.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ScenarioConfig& config);

/// Resolves random initial states from the seed and checks every invariant
/// that does not depend on the mode. Throws ConfigError.
Scenario build_scenario(const ScenarioConfig& config);

std::vector<std::string> preset_names();
/// Throws ConfigError listing the available presets for an unknown name.
ScenarioConfig preset(const std::string& name, std::uint64_t seed = 1);

/// The six inertia matrices of the reference experiment, kg m^2.
std::vector<Mat3d> paper_inertias();
/// Communication graph of the reference experiment (a_ij > 0: i hears j).
Eigen::MatrixXd paper_adjacency();

}  // namespace attsync
