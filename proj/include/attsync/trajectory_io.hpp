#pragma once

// trajectory.csv columns, in order:
//   t,
//   for each spacecraft i = 1..N:
//     sigma_i_x, sigma_i_y, sigma_i_z, omega_i_x, omega_i_y, omega_i_z,
//     u_i_x, u_i_y, u_i_z, theta_hat_i_1 .. theta_hat_i_6,
//   V, D, and T in tracking mode.
// Numbers use '.' as decimal separator and the shortest round-trip form.

#include <attsync/simulator.hpp>

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace attsync {

std::vector<std::string> trajectory_csv_header(Mode mode, int spacecraft_count);

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log);

/// Shortest decimal text that parses back to exactly x.
std::string format_double(double x);

nlohmann::json metrics_json(const RunMetrics& m);

}  // namespace attsync
