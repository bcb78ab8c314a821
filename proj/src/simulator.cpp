#include <attsync/errors.hpp>
#include <attsync/simulator.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

namespace attsync {

std::string to_string(Mode mode) { return mode == Mode::leaderless ? "leaderless" : "tracking"; }

Mode mode_from_string(const std::string& name) {
  if (name == "leaderless") return Mode::leaderless;
  if (name == "tracking") return Mode::tracking;
  throw ConfigError("unknown mode '" + name + "' (expected leaderless or tracking)");
}

std::string to_string(AccelerationCoupling coupling) {
  switch (coupling) {
    case AccelerationCoupling::lagged: return "lagged";
    case AccelerationCoupling::exact: return "exact";
    case AccelerationCoupling::omitted: return "omitted";
  }
  return "lagged";
}

AccelerationCoupling coupling_from_string(const std::string& name) {
  if (name == "lagged") return AccelerationCoupling::lagged;
  if (name == "exact") return AccelerationCoupling::exact;
  if (name == "omitted") return AccelerationCoupling::omitted;
  throw ConfigError("unknown coupling '" + name + "' (expected lagged, exact or omitted)");
}

std::size_t Scenario::step_count() const {
  if (!(dt > 0.0)) return 0;
  return static_cast<std::size_t>(std::floor(duration / dt + 1e-9));
}

std::vector<std::string> scenario_diagnostics(const Scenario& scenario) {
  std::vector<std::string> out;
  const int n = static_cast<int>(scenario.spacecraft.size());
  if (n == 0) out.push_back("scenario has no spacecraft");
  if (n != scenario.topology.size()) {
    out.push_back("topology has " + std::to_string(scenario.topology.size()) +
                  " nodes but scenario has " + std::to_string(n) + " spacecraft");
  }
  if (!(scenario.dt > 0.0) || !std::isfinite(scenario.dt)) out.push_back("dt must be positive");
  if (!(scenario.duration >= scenario.dt) || !std::isfinite(scenario.duration)) {
    out.push_back("duration must be at least dt");
  }
  if (scenario.decimate < 1) out.push_back("decimate must be at least 1");
  for (int i = 0; i < n; ++i) {
    const auto& sc = scenario.spacecraft[i];
    try {
      sc.gains.validate();
    } catch (const ValidationError& e) {
      out.push_back("spacecraft " + std::to_string(i + 1) + ": " + e.what());
    }
    if (!sc.initial.sigma.allFinite() || !sc.initial.omega.allFinite()) {
      out.push_back("spacecraft " + std::to_string(i + 1) + ": initial state must be finite");
    }
    if (!sc.theta_hat0.allFinite()) {
      out.push_back("spacecraft " + std::to_string(i + 1) + ": initial estimate must be finite");
    }
  }
  if (n == scenario.topology.size()) {
    const auto graph = scenario.mode == Mode::leaderless
                           ? leaderless_diagnostics(scenario.topology)
                           : leader_rooted_diagnostics(scenario.topology);
    out.insert(out.end(), graph.begin(), graph.end());
  }
  return out;
}

void validate_scenario(const Scenario& scenario) {
  const auto problems = scenario_diagnostics(scenario);
  if (problems.empty()) return;
  std::ostringstream msg;
  msg << "invalid scenario:";
  for (const auto& p : problems) msg << "\n  " << p;
  throw ConfigError(msg.str());
}

std::vector<SpacecraftStated> random_initial_states(std::uint64_t seed, int n, double sigma_bound,
                                                    double omega_bound) {
  if (n < 0 || !(sigma_bound >= 0.0) || !(omega_bound >= 0.0)) {
    throw ValidationError("random initial states need n >= 0 and nonnegative bounds");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<SpacecraftStated> out(n);
  for (auto& s : out) {
    for (int c = 0; c < 3; ++c) s.sigma(c) = sigma_bound * unit(rng);
    for (int c = 0; c < 3; ++c) s.omega(c) = omega_bound * unit(rng);
  }
  return out;
}

SimulationState initial_state(const Scenario& scenario) {
  SimulationState st;
  st.t = 0.0;
  for (const auto& sc : scenario.spacecraft) {
    st.states.push_back(sc.initial);
    st.theta_hat.push_back(sc.theta_hat0);
  }
  st.lag.sigma_ddot.assign(scenario.spacecraft.size(), Vec3d::Zero());
  return st;
}

namespace {

std::optional<Vec3d> leader_term(const std::optional<ReferenceSample>& ref,
                                 Vec3d ReferenceSample::*field) {
  if (!ref) return std::nullopt;
  return (*ref).*field;
}

/// sigma_ddot of every spacecraft with the neighbor-acceleration loop solved exactly.
///
/// The controller's only dependence on sigma_ddot^d is the feedforward
/// J_hat G^-1 sigma_ddot^d, so sigma_ddot_i = c_i + B_i sum_j w_ij sigma_ddot_j with
/// B_i = G J^-1 J_hat G^-1 and w_ij = a_ij / (sum_j a_ij + b_i).
std::vector<Vec3d> solve_accelerations(const Scenario& scenario,
                                       std::span<const SpacecraftStated> states,
                                       std::span<const ThetaVecd> theta_hat,
                                       std::span<const Vec3d> sigma,
                                       std::span<const Vec3d> sigma_dot,
                                       const std::optional<ReferenceSample>& ref) {
  const int n = static_cast<int>(states.size());
  const CommTopology& topo = scenario.topology;
  const std::vector<Vec3d> zeros(n, Vec3d::Zero());
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(3 * n, 3 * n);
  Eigen::VectorXd rhs(3 * n);
  for (int i = 0; i < n; ++i) {
    const auto& spec = scenario.spacecraft[i];
    NeighborhoodSignalsd signals;
    signals.sigma_d = neighborhood_aggregate(topo, i, sigma, leader_term(ref, &ReferenceSample::sigma));
    signals.sigma_d_dot =
        neighborhood_aggregate(topo, i, sigma_dot, leader_term(ref, &ReferenceSample::sigma_dot));
    signals.sigma_d_ddot =
        neighborhood_aggregate(topo, i, zeros, leader_term(ref, &ReferenceSample::sigma_ddot));
    Vec3d torque = Vec3d::Zero();
    if (scenario.control_enabled) {
      torque = evaluate_controller(states[i].sigma, sigma_dot[i], signals, theta_hat[i], spec.gains)
                   .torque;
    }
    const Mat3d G = kinematics_matrix(states[i].sigma);
    rhs.segment<3>(3 * i) = kinematics_matrix_dot(states[i].sigma, sigma_dot[i]) * states[i].omega +
                            G * angular_acceleration(spec.inertia, states[i].omega, torque);
    if (!scenario.control_enabled) continue;

    const Mat3d feedthrough = G * spec.inertia.inverse() * inertia_from_theta(theta_hat[i]) *
                              kinematics_matrix_inverse(states[i].sigma);
    double denom = topo.adjacency().row(i).sum();
    if (ref) denom += topo.leader_weight(i);
    for (int j = 0; j < n; ++j) {
      const double a = topo.adjacency()(i, j);
      if (a != 0.0) system.block<3, 3>(3 * i, 3 * j) -= (a / denom) * feedthrough;
    }
  }
  const Eigen::VectorXd x = system.fullPivLu().solve(rhs);
  std::vector<Vec3d> out(n);
  for (int i = 0; i < n; ++i) out[i] = x.segment<3>(3 * i);
  return out;
}

}  // namespace

std::vector<AgentEvaluation> evaluate_closed_loop(const Scenario& scenario, double t,
                                                  std::span<const SpacecraftStated> states,
                                                  std::span<const ThetaVecd> theta_hat,
                                                  const LagBuffer& lag) {
  const std::size_t n = states.size();
  std::vector<Vec3d> sigma(n), sigma_dot(n);
  for (std::size_t i = 0; i < n; ++i) {
    sigma[i] = states[i].sigma;
    sigma_dot[i] = mrp_rate(states[i].sigma, states[i].omega);
  }

  std::optional<ReferenceSample> ref;
  if (scenario.mode == Mode::tracking) ref = scenario.reference.at(t);

  std::vector<Vec3d> neighbor_ddot;
  switch (scenario.coupling) {
    case AccelerationCoupling::exact:
      neighbor_ddot = solve_accelerations(scenario, states, theta_hat, sigma, sigma_dot, ref);
      break;
    case AccelerationCoupling::lagged:
      neighbor_ddot = lag.sigma_ddot;
      break;
    case AccelerationCoupling::omitted:
      neighbor_ddot.assign(n, Vec3d::Zero());
      break;
  }

  std::vector<AgentEvaluation> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int node = static_cast<int>(i);
    const auto& spec = scenario.spacecraft[i];
    AgentEvaluation& ev = out[i];
    ev.sigma_dot = sigma_dot[i];
    ev.signals.sigma_d =
        neighborhood_aggregate(scenario.topology, node, sigma, leader_term(ref, &ReferenceSample::sigma));
    ev.signals.sigma_d_dot = neighborhood_aggregate(scenario.topology, node, sigma_dot,
                                                    leader_term(ref, &ReferenceSample::sigma_dot));
    ev.signals.sigma_d_ddot = neighborhood_aggregate(
        scenario.topology, node, neighbor_ddot, leader_term(ref, &ReferenceSample::sigma_ddot));

    ev.control = evaluate_controller(states[i].sigma, sigma_dot[i], ev.signals, theta_hat[i],
                                     spec.gains);
    if (!scenario.control_enabled) {
      ev.control.torque.setZero();
      ev.control.theta_hat_rate.setZero();
    }
    if (!scenario.adaptation_enabled) ev.control.theta_hat_rate.setZero();

    ev.omega_dot = angular_acceleration(spec.inertia, states[i].omega, ev.control.torque);
    ev.sigma_ddot = kinematics_matrix_dot(states[i].sigma, sigma_dot[i]) * states[i].omega +
                    kinematics_matrix(states[i].sigma) * ev.omega_dot;
  }
  return out;
}

double max_pairwise_distance(std::span<const Vec3d> values) {
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      d = std::max(d, (values[i] - values[j]).norm());
    }
  }
  return d;
}

double max_distance_to(std::span<const Vec3d> values, const Vec3d& target) {
  double d = 0.0;
  for (const auto& v : values) d = std::max(d, (v - target).norm());
  return d;
}

double lyapunov_term(const InertiaParamsd& inertia, const Vec3d& sigma, const Vec3d& s,
                     const ThetaVecd& theta_hat, const ThetaVecd& gamma) {
  const ThetaVecd tilde = inertia.theta() - theta_hat;
  const double kinetic = s.dot(h_star(inertia, sigma) * s);
  const double estimate = tilde.dot(tilde.cwiseQuotient(gamma));
  return 0.5 * (kinetic + estimate);
}

double lyapunov_value(const Scenario& scenario, double t, std::span<const SpacecraftStated> states,
                      std::span<const ThetaVecd> theta_hat) {
  // s depends on sigma and sigma_dot aggregates only, so the lag contents are irrelevant here.
  LagBuffer lag;
  lag.sigma_ddot.assign(states.size(), Vec3d::Zero());
  const auto ev = evaluate_closed_loop(scenario, t, states, theta_hat, lag);
  double v = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    v += lyapunov_term(scenario.spacecraft[i].inertia, states[i].sigma, ev[i].control.s,
                       theta_hat[i], scenario.spacecraft[i].gains.gamma);
  }
  return v;
}

namespace {

Record record_from(const Scenario& scenario, const SimulationState& state,
                   const std::vector<AgentEvaluation>& ev) {
  const std::size_t n = state.states.size();
  Record rec;
  rec.t = state.t;
  rec.agents.resize(n);
  std::vector<Vec3d> sigma(n), sigma_dot(n);
  for (std::size_t i = 0; i < n; ++i) {
    AgentRecord& a = rec.agents[i];
    a.sigma = state.states[i].sigma;
    a.omega = state.states[i].omega;
    a.sigma_dot = ev[i].sigma_dot;
    a.torque = ev[i].control.torque;
    a.theta_hat = state.theta_hat[i];
    a.e = ev[i].control.error.e;
    a.e_dot = ev[i].control.error.e_dot;
    a.s = ev[i].control.s;
    sigma[i] = a.sigma;
    sigma_dot[i] = a.sigma_dot;
    rec.lyapunov += lyapunov_term(scenario.spacecraft[i].inertia, a.sigma, a.s, a.theta_hat,
                                  scenario.spacecraft[i].gains.gamma);
  }
  rec.disagreement = max_pairwise_distance(sigma);
  rec.velocity_disagreement = max_pairwise_distance(sigma_dot);
  if (scenario.mode == Mode::tracking) {
    const ReferenceSample ref = scenario.reference.at(state.t);
    rec.tracking_error = max_distance_to(sigma, ref.sigma);
    rec.velocity_tracking_error = max_distance_to(sigma_dot, ref.sigma_dot);
  }
  return rec;
}

struct Derivative {
  std::vector<Vec3d> sigma_dot;
  std::vector<Vec3d> omega_dot;
  std::vector<ThetaVecd> theta_hat_dot;
};

Derivative derivative(const Scenario& scenario, double t, std::span<const SpacecraftStated> states,
                      std::span<const ThetaVecd> theta_hat, const LagBuffer& lag) {
  const auto ev = evaluate_closed_loop(scenario, t, states, theta_hat, lag);
  Derivative d;
  for (const auto& e : ev) {
    d.sigma_dot.push_back(e.sigma_dot);
    d.omega_dot.push_back(e.omega_dot);
    d.theta_hat_dot.push_back(e.control.theta_hat_rate);
  }
  return d;
}

void advance(const SimulationState& base, const Derivative& d, double h,
             std::vector<SpacecraftStated>& states, std::vector<ThetaVecd>& theta_hat) {
  const std::size_t n = base.states.size();
  states.resize(n);
  theta_hat.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    states[i].sigma = base.states[i].sigma + h * d.sigma_dot[i];
    states[i].omega = base.states[i].omega + h * d.omega_dot[i];
    theta_hat[i] = base.theta_hat[i] + h * d.theta_hat_dot[i];
  }
}

void check_divergence(const SimulationState& st) {
  for (std::size_t i = 0; i < st.states.size(); ++i) {
    const auto& s = st.states[i];
    const bool finite =
        s.sigma.allFinite() && s.omega.allFinite() && st.theta_hat[i].allFinite();
    if (!finite || s.sigma.norm() > kDivergenceBound) {
      std::ostringstream msg;
      msg << "spacecraft " << i + 1 << " diverged at t=" << st.t
          << (finite ? " (|sigma| exceeded bound)" : " (non-finite state)");
      throw DivergenceError(msg.str(), static_cast<int>(i) + 1, st.t);
    }
  }
}

}  // namespace

Record make_record(const Scenario& scenario, const SimulationState& state) {
  return record_from(scenario, state,
                     evaluate_closed_loop(scenario, state.t, state.states, state.theta_hat, state.lag));
}

StepResult step(const Scenario& scenario, const SimulationState& state) {
  const double h = scenario.dt;
  const double t = state.t;

  std::vector<SpacecraftStated> xs;
  std::vector<ThetaVecd> th;

  const Derivative k1 = derivative(scenario, t, state.states, state.theta_hat, state.lag);
  advance(state, k1, 0.5 * h, xs, th);
  const Derivative k2 = derivative(scenario, t + 0.5 * h, xs, th, state.lag);
  advance(state, k2, 0.5 * h, xs, th);
  const Derivative k3 = derivative(scenario, t + 0.5 * h, xs, th, state.lag);
  advance(state, k3, h, xs, th);
  const Derivative k4 = derivative(scenario, t + h, xs, th, state.lag);

  StepResult out;
  SimulationState& next = out.next;
  next.t = t + h;
  const std::size_t n = state.states.size();
  next.states.resize(n);
  next.theta_hat.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    next.states[i].sigma =
        state.states[i].sigma +
        (h / 6.0) * (k1.sigma_dot[i] + 2.0 * k2.sigma_dot[i] + 2.0 * k3.sigma_dot[i] + k4.sigma_dot[i]);
    next.states[i].omega =
        state.states[i].omega +
        (h / 6.0) * (k1.omega_dot[i] + 2.0 * k2.omega_dot[i] + 2.0 * k3.omega_dot[i] + k4.omega_dot[i]);
    next.theta_hat[i] = state.theta_hat[i] + (h / 6.0) * (k1.theta_hat_dot[i] +
                                                           2.0 * k2.theta_hat_dot[i] +
                                                           2.0 * k3.theta_hat_dot[i] +
                                                           k4.theta_hat_dot[i]);
    if (scenario.shadow_switch && next.states[i].sigma.squaredNorm() > 1.0) {
      next.states[i].sigma = shadow_mrp(next.states[i].sigma);
    }
  }
  check_divergence(next);

  // Refresh the hold with accelerations produced by the post-step torques.
  const auto ev = evaluate_closed_loop(scenario, next.t, next.states, next.theta_hat, state.lag);
  next.lag.sigma_ddot.resize(n);
  for (std::size_t i = 0; i < n; ++i) next.lag.sigma_ddot[i] = ev[i].sigma_ddot;

  out.record = make_record(scenario, next);
  return out;
}

TrajectoryLog run(const Scenario& scenario) {
  validate_scenario(scenario);
  TrajectoryLog log;
  log.mode = scenario.mode;
  log.spacecraft_count = static_cast<int>(scenario.spacecraft.size());
  log.dt = scenario.dt;
  log.decimate = scenario.decimate;
  log.steps = scenario.step_count();

  SimulationState state = initial_state(scenario);
  log.records.push_back(make_record(scenario, state));
  log.final_record = log.records.back();
  for (std::size_t k = 1; k <= log.steps; ++k) {
    StepResult r = step(scenario, state);
    state = std::move(r.next);
    if (k % static_cast<std::size_t>(scenario.decimate) == 0) log.records.push_back(r.record);
    log.final_record = std::move(r.record);
  }
  return log;
}

RunMetrics metrics(const TrajectoryLog& log) {
  if (log.records.empty()) throw ValidationError("metrics need a nonempty log");
  std::vector<const Record*> samples;
  for (const auto& r : log.records) samples.push_back(&r);
  if (log.final_record.t > log.records.back().t) samples.push_back(&log.final_record);

  RunMetrics m;
  m.theta_hat_min = ThetaVecd::Constant(std::numeric_limits<double>::infinity());
  m.theta_hat_max = ThetaVecd::Constant(-std::numeric_limits<double>::infinity());
  m.worst_lyapunov_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Record& r = *samples[k];
    m.t.push_back(r.t);
    m.disagreement.push_back(r.disagreement);
    m.velocity_disagreement.push_back(r.velocity_disagreement);
    m.tracking_error.push_back(r.tracking_error);
    m.velocity_tracking_error.push_back(r.velocity_tracking_error);
    m.lyapunov.push_back(r.lyapunov);
    for (const auto& a : r.agents) {
      m.max_torque = std::max(m.max_torque, a.torque.norm());
      m.max_theta_hat_norm = std::max(m.max_theta_hat_norm, a.theta_hat.norm());
      m.max_s_norm = std::max(m.max_s_norm, a.s.norm());
      m.theta_hat_min = m.theta_hat_min.cwiseMin(a.theta_hat);
      m.theta_hat_max = m.theta_hat_max.cwiseMax(a.theta_hat);
    }
    if (k > 0) {
      const double prev = samples[k - 1]->lyapunov;
      m.worst_lyapunov_excess =
          std::max(m.worst_lyapunov_excess, r.lyapunov - prev - kLyapunovSlack * (1.0 + prev));
    }
  }
  if (samples.size() == 1) m.worst_lyapunov_excess = 0.0;
  const Record& last = *samples.back();
  m.final_disagreement = last.disagreement;
  m.final_velocity_disagreement = last.velocity_disagreement;
  m.final_tracking_error = last.tracking_error;
  m.final_velocity_tracking_error = last.velocity_tracking_error;
  m.initial_lyapunov = samples.front()->lyapunov;
  m.final_lyapunov = last.lyapunov;
  return m;
}

}  // namespace attsync
