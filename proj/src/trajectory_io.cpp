#include <attsync/trajectory_io.hpp>

#include <charconv>
#include <cmath>

namespace attsync {

std::vector<std::string> trajectory_csv_header(Mode mode, int spacecraft_count) {
  std::vector<std::string> cols{"t"};
  static const char* const axes[] = {"x", "y", "z"};
  for (int i = 1; i <= spacecraft_count; ++i) {
    const std::string id = std::to_string(i);
    for (const char* a : axes) cols.push_back("sigma_" + id + "_" + a);
    for (const char* a : axes) cols.push_back("omega_" + id + "_" + a);
    for (const char* a : axes) cols.push_back("u_" + id + "_" + a);
    for (int k = 1; k <= 6; ++k) cols.push_back("theta_hat_" + id + "_" + std::to_string(k));
  }
  cols.push_back("V");
  cols.push_back("D");
  if (mode == Mode::tracking) cols.push_back("T");
  return cols;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log) {
  const auto header = trajectory_csv_header(log.mode, log.spacecraft_count);
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  std::string line;
  for (const Record& r : log.records) {
    line = format_double(r.t);
    auto put = [&line](double v) {
      line += ',';
      line += format_double(v);
    };
    for (const AgentRecord& a : r.agents) {
      for (int c = 0; c < 3; ++c) put(a.sigma(c));
      for (int c = 0; c < 3; ++c) put(a.omega(c));
      for (int c = 0; c < 3; ++c) put(a.torque(c));
      for (int c = 0; c < 6; ++c) put(a.theta_hat(c));
    }
    put(r.lyapunov);
    put(r.disagreement);
    if (log.mode == Mode::tracking) put(r.tracking_error);
    out << line << '\n';
  }
}

nlohmann::json metrics_json(const RunMetrics& m) {
  auto vec = [](const ThetaVecd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
  };
  return {{"final_disagreement", m.final_disagreement},
          {"final_velocity_disagreement", m.final_velocity_disagreement},
          {"final_tracking_error", m.final_tracking_error},
          {"final_velocity_tracking_error", m.final_velocity_tracking_error},
          {"initial_lyapunov", m.initial_lyapunov},
          {"final_lyapunov", m.final_lyapunov},
          {"worst_lyapunov_excess", m.worst_lyapunov_excess},
          {"max_torque", m.max_torque},
          {"max_theta_hat_norm", m.max_theta_hat_norm},
          {"max_s_norm", m.max_s_norm},
          {"theta_hat_min", vec(m.theta_hat_min)},
          {"theta_hat_max", vec(m.theta_hat_max)}};
}

}  // namespace attsync
