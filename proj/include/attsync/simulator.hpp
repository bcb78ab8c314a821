#pragma once

// Closed-loop simulation of N spacecraft under the distributed adaptive
// controllers, integrated with fixed-step RK4.
//
// Neighbor accelerations: the aggregate sigma_ddot^d of node i needs sigma_ddot
// of its neighbors, which depends on their torques, which depend on their own
// aggregates. By default the loop is broken with a one-step hold (LagBuffer):
// every RK4 stage of a step reads neighbor accelerations from the buffer, and
// the buffer is refreshed from the post-step state afterwards.
//
// The loop gain is roughly W J^-1 J_hat. Once the estimates drift far from the
// true inertia it exceeds one, the hold iterates unstably, and the exact
// solve meets singular points. With identical estimates and no leader the
// exact system is singular outright.

#include <attsync/attitude_math.hpp>
#include <attsync/control_laws.hpp>
#include <attsync/reference_trajectory.hpp>
#include <attsync/rigid_body.hpp>
#include <attsync/topology.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace attsync {

enum class Mode { leaderless, tracking };

/// How neighbor accelerations inside sigma_ddot^d are obtained.
///   lagged:  hold the previous step's sigma_ddot (LagBuffer).
///   exact:   solve the coupled linear system for all sigma_ddot at every evaluation.
///   omitted: treat neighbor sigma_ddot as zero; only the leader's enters.
enum class AccelerationCoupling { lagged, exact, omitted };

std::string to_string(Mode mode);
/// Throws ConfigError for anything but "leaderless" or "tracking".
Mode mode_from_string(const std::string& name);

std::string to_string(AccelerationCoupling coupling);
/// Throws ConfigError for anything but "lagged", "exact" or "omitted".
AccelerationCoupling coupling_from_string(const std::string& name);

struct SpacecraftSpec {
  InertiaParamsd inertia{Mat3d::Identity()};
  SpacecraftStated initial;
  ThetaVecd theta_hat0 = ThetaVecd::Zero();
  GainSetd gains;
};

struct Scenario {
  std::vector<SpacecraftSpec> spacecraft;
  CommTopology topology;
  Mode mode = Mode::leaderless;
  ReferenceTrajectory reference;
  double dt = 0.005;
  double duration = 40.0;
  std::uint64_t seed = 0;
  bool shadow_switch = false;
  /// Log every decimate-th step; 1 logs every step.
  int decimate = 10;
  AccelerationCoupling coupling = AccelerationCoupling::lagged;
  /// Test hooks: disable the torque entirely, or freeze the estimates.
  bool control_enabled = true;
  bool adaptation_enabled = true;

  std::size_t step_count() const;
};

/// Everything that keeps a scenario from being simulated; empty when valid.
std::vector<std::string> scenario_diagnostics(const Scenario& scenario);
/// Throws ConfigError listing scenario_diagnostics when non-empty.
void validate_scenario(const Scenario& scenario);

/// Componentwise uniform draws in [-bound, bound]; deterministic per seed.
std::vector<SpacecraftStated> random_initial_states(std::uint64_t seed, int n, double sigma_bound,
                                                    double omega_bound);

struct LagBuffer {
  std::vector<Vec3d> sigma_ddot;
};

struct SimulationState {
  double t = 0.0;
  std::vector<SpacecraftStated> states;
  std::vector<ThetaVecd> theta_hat;
  LagBuffer lag;
};

SimulationState initial_state(const Scenario& scenario);

/// Per-spacecraft signals of one closed-loop evaluation.
struct AgentEvaluation {
  Vec3d sigma_dot;
  Vec3d omega_dot;
  Vec3d sigma_ddot;
  NeighborhoodSignalsd signals;
  ControllerOutput<double> control;
};

/// Evaluates every controller and plant derivative at one instant. Neighbor
/// accelerations come from lag in lagged coupling; lag is ignored otherwise.
std::vector<AgentEvaluation> evaluate_closed_loop(const Scenario& scenario, double t,
                                                  std::span<const SpacecraftStated> states,
                                                  std::span<const ThetaVecd> theta_hat,
                                                  const LagBuffer& lag);

struct AgentRecord {
  Vec3d sigma;
  Vec3d omega;
  Vec3d sigma_dot;
  Vec3d torque;
  ThetaVecd theta_hat;
  Vec3d e;
  Vec3d e_dot;
  Vec3d s;
};

struct Record {
  double t = 0.0;
  std::vector<AgentRecord> agents;
  double lyapunov = 0.0;
  /// max_ij |sigma_i - sigma_j| and the same for sigma_dot.
  double disagreement = 0.0;
  double velocity_disagreement = 0.0;
  /// max_i |sigma_i - sigma_r| and the same for sigma_dot; zero in leaderless mode.
  double tracking_error = 0.0;
  double velocity_tracking_error = 0.0;
};

Record make_record(const Scenario& scenario, const SimulationState& state);

struct StepResult {
  SimulationState next;
  Record record;
};

/// One RK4 step of (sigma, omega, theta_hat) for every spacecraft, followed by
/// the lag-buffer refresh. Throws DivergenceError if any |sigma| exceeds 1e3 or
/// a value becomes non-finite.
StepResult step(const Scenario& scenario, const SimulationState& state);

struct TrajectoryLog {
  Mode mode = Mode::leaderless;
  int spacecraft_count = 0;
  double dt = 0.0;
  int decimate = 1;
  std::size_t steps = 0;
  std::vector<Record> records;
  /// Always the state at the last step, whether or not it falls on the decimation grid.
  Record final_record;
};

TrajectoryLog run(const Scenario& scenario);

/// Divergence threshold on |sigma|.
inline constexpr double kDivergenceBound = 1e3;

double max_pairwise_distance(std::span<const Vec3d> values);
double max_distance_to(std::span<const Vec3d> values, const Vec3d& target);

/// One spacecraft's share of the Lyapunov function:
/// 0.5 * (s^T H*(sigma) s + theta_tilde^T Gamma^-1 theta_tilde).
double lyapunov_term(const InertiaParamsd& inertia, const Vec3d& sigma, const Vec3d& s,
                     const ThetaVecd& theta_hat, const ThetaVecd& gamma);

/// Lyapunov function of the whole network at one instant. Reads the true
/// inertias from the scenario; only the monitor does this, never the controllers.
double lyapunov_value(const Scenario& scenario, double t, std::span<const SpacecraftStated> states,
                      std::span<const ThetaVecd> theta_hat);

struct RunMetrics {
  std::vector<double> t;
  std::vector<double> disagreement;
  std::vector<double> velocity_disagreement;
  std::vector<double> tracking_error;
  std::vector<double> velocity_tracking_error;
  std::vector<double> lyapunov;

  double final_disagreement = 0.0;
  double final_velocity_disagreement = 0.0;
  double final_tracking_error = 0.0;
  double final_velocity_tracking_error = 0.0;
  double initial_lyapunov = 0.0;
  double final_lyapunov = 0.0;
  double max_torque = 0.0;
  double max_theta_hat_norm = 0.0;
  double max_s_norm = 0.0;
  ThetaVecd theta_hat_min = ThetaVecd::Zero();
  ThetaVecd theta_hat_max = ThetaVecd::Zero();
  /// Largest V(t_{k+1}) - V(t_k) - slack * (1 + V(t_k)) over logged samples; <= 0 means monotone within slack.
  double worst_lyapunov_excess = 0.0;
};

/// Lyapunov slack per logged sample used by worst_lyapunov_excess.
inline constexpr double kLyapunovSlack = 1e-4;

/// Throws ValidationError on an empty log.
RunMetrics metrics(const TrajectoryLog& log);

}  // namespace attsync
