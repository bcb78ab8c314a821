#include <attsync/errors.hpp>
#include <attsync/topology.hpp>

#include <cmath>
#include <string>

namespace attsync {

CommTopology::CommTopology(Eigen::MatrixXd adjacency, std::optional<Eigen::VectorXd> leader_weights)
    : adjacency_(std::move(adjacency)), leader_weights_(std::move(leader_weights)) {
  if (adjacency_.rows() != adjacency_.cols()) {
    throw ValidationError("adjacency matrix must be square");
  }
  if (adjacency_.rows() == 0) {
    throw ValidationError("topology must have at least one node");
  }
  const Eigen::Index n = adjacency_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = adjacency_(i, j);
      if (!std::isfinite(a) || a < 0.0) {
        throw ValidationError("adjacency weight (" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ") must be finite and nonnegative");
      }
    }
    if (adjacency_(i, i) != 0.0) {
      throw ValidationError("adjacency diagonal entry " + std::to_string(i + 1) + " must be zero");
    }
  }
  if (leader_weights_) {
    if (leader_weights_->size() != n) {
      throw ValidationError("leader weight vector length must equal the node count");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const double b = (*leader_weights_)(i);
      if (!std::isfinite(b) || b < 0.0) {
        throw ValidationError("leader weight " + std::to_string(i + 1) +
                              " must be finite and nonnegative");
      }
    }
  }
}

double CommTopology::leader_weight(int i) const {
  return leader_weights_ ? (*leader_weights_)(i) : 0.0;
}

CommTopology CommTopology::with_leader(std::optional<Eigen::VectorXd> leader_weights) const {
  return CommTopology(adjacency_, std::move(leader_weights));
}

Eigen::MatrixXd laplacian(const CommTopology& topo) {
  Eigen::MatrixXd L = -topo.adjacency();
  L.diagonal() = topo.adjacency().rowwise().sum();
  return L;
}

Eigen::MatrixXd degree_matrix(const CommTopology& topo, bool include_leader) {
  Eigen::VectorXd d = topo.adjacency().rowwise().sum();
  if (include_leader && topo.has_leader()) {
    d += *topo.leader_weights();
  }
  return d.asDiagonal();
}

std::vector<int> in_degrees(const CommTopology& topo) {
  const int n = topo.size();
  std::vector<int> deg(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (topo.adjacency()(i, j) > 0.0) ++deg[i];
    }
  }
  return deg;
}

Eigen::MatrixXd augmented_adjacency(const CommTopology& topo) {
  const int n = topo.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n + 1);
  a.topLeftCorner(n, n) = topo.adjacency();
  if (topo.has_leader()) {
    a.col(n).head(n) = *topo.leader_weights();
  }
  return a;
}

std::vector<bool> reachable_from(const Eigen::MatrixXd& adjacency, int root) {
  const int n = static_cast<int>(adjacency.rows());
  std::vector<bool> seen(n, false);
  std::vector<int> stack{root};
  seen[root] = true;
  while (!stack.empty()) {
    const int j = stack.back();
    stack.pop_back();
    for (int i = 0; i < n; ++i) {
      if (!seen[i] && adjacency(i, j) > 0.0) {
        seen[i] = true;
        stack.push_back(i);
      }
    }
  }
  return seen;
}

namespace {

bool reaches_all(const Eigen::MatrixXd& adjacency, int root) {
  for (bool r : reachable_from(adjacency, root)) {
    if (!r) return false;
  }
  return true;
}

}  // namespace

bool has_directed_spanning_tree(const Eigen::MatrixXd& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  for (int root = 0; root < n; ++root) {
    if (reaches_all(adjacency, root)) return true;
  }
  return false;
}

bool has_directed_spanning_tree(const CommTopology& topo) {
  return has_directed_spanning_tree(topo.adjacency());
}

bool leaderless_valid(const CommTopology& topo) { return leaderless_diagnostics(topo).empty(); }

bool leader_rooted_valid(const CommTopology& topo) {
  if (!topo.has_leader()) {
    throw ConfigError("leader-rooted check requires leader weights");
  }
  return reaches_all(augmented_adjacency(topo), topo.size());
}

std::vector<std::string> leaderless_diagnostics(const CommTopology& topo) {
  std::vector<std::string> out;
  const auto deg = in_degrees(topo);
  for (int i = 0; i < topo.size(); ++i) {
    if (deg[i] == 0) out.push_back("node " + std::to_string(i + 1) + " has no in-neighbor");
  }
  if (!has_directed_spanning_tree(topo)) {
    out.push_back("graph has no directed spanning tree");
  }
  return out;
}

std::vector<std::string> leader_rooted_diagnostics(const CommTopology& topo) {
  if (!topo.has_leader()) {
    return {"leader weights are missing"};
  }
  const int n = topo.size();
  const auto seen = reachable_from(augmented_adjacency(topo), n);
  std::vector<std::string> out;
  int reached = 0;
  for (int i = 0; i < n; ++i) reached += seen[i] ? 1 : 0;
  if (reached == 0) {
    out.push_back("leader reaches no node");
    return out;
  }
  for (int i = 0; i < n; ++i) {
    if (!seen[i]) out.push_back("leader does not reach node " + std::to_string(i + 1));
  }
  return out;
}

Vec3d neighborhood_aggregate(const CommTopology& topo, int i, std::span<const Vec3d> values,
                             const std::optional<Vec3d>& leader_value) {
  const int n = topo.size();
  if (static_cast<int>(values.size()) != n) {
    throw ValidationError("aggregate needs one value per node");
  }
  Vec3d sum = Vec3d::Zero();
  double weight = 0.0;
  for (int j = 0; j < n; ++j) {
    const double a = topo.adjacency()(i, j);
    if (a == 0.0) continue;
    sum += a * values[j];
    weight += a;
  }
  if (leader_value) {
    const double b = topo.leader_weight(i);
    if (b != 0.0) {
      sum += b * *leader_value;
      weight += b;
    }
  }
  if (!(weight > 0.0)) {
    throw ConfigError("node " + std::to_string(i + 1) + " has no information source");
  }
  return sum / weight;
}

}  // namespace attsync
