#pragma once

// Weighted directed communication graphs.
//
// Edge convention: adjacency(i, j) > 0 means spacecraft i receives the
// attitude of spacecraft j (edge j -> i). The optional leader weight b_i > 0
// means spacecraft i reads the reference (virtual leader, node N+1).

#include <attsync/attitude_math.hpp>

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace attsync {

class CommTopology {
public:
  /// Single isolated node.
  CommTopology() : CommTopology(Eigen::MatrixXd::Zero(1, 1)) {}

  /// Throws ValidationError on non-square input, nonzero diagonal, negative or
  /// non-finite weights, or a leader vector of the wrong length.
  explicit CommTopology(Eigen::MatrixXd adjacency,
                        std::optional<Eigen::VectorXd> leader_weights = std::nullopt);

  int size() const { return static_cast<int>(adjacency_.rows()); }
  const Eigen::MatrixXd& adjacency() const { return adjacency_; }
  const std::optional<Eigen::VectorXd>& leader_weights() const { return leader_weights_; }
  bool has_leader() const { return leader_weights_.has_value(); }

  /// Weight of the leader edge into node i; 0 without leader weights.
  double leader_weight(int i) const;

  /// Copy with the leader weights replaced.
  CommTopology with_leader(std::optional<Eigen::VectorXd> leader_weights) const;

private:
  Eigen::MatrixXd adjacency_;
  std::optional<Eigen::VectorXd> leader_weights_;
};

/// L = D - A with D the diagonal of row sums of A.
Eigen::MatrixXd laplacian(const CommTopology& topo);

/// Diagonal of row sums; with include_leader the leader weight b_i is added to row i.
Eigen::MatrixXd degree_matrix(const CommTopology& topo, bool include_leader = false);

/// Number of information sources of each node (nonzero entries per row).
std::vector<int> in_degrees(const CommTopology& topo);

/// Adjacency of the graph with the virtual leader appended as the last node.
/// Row N is all zero (the leader hears nobody); column N holds b.
Eigen::MatrixXd augmented_adjacency(const CommTopology& topo);

/// Nodes reachable from root following edges j -> i wherever adjacency(i, j) > 0.
std::vector<bool> reachable_from(const Eigen::MatrixXd& adjacency, int root);

/// True iff some node reaches every node.
bool has_directed_spanning_tree(const Eigen::MatrixXd& adjacency);
bool has_directed_spanning_tree(const CommTopology& topo);

/// Every node has an in-neighbor and the graph has a directed spanning tree.
bool leaderless_valid(const CommTopology& topo);

/// The virtual leader reaches every node in the augmented graph.
/// Throws ConfigError when the topology has no leader weights.
bool leader_rooted_valid(const CommTopology& topo);

/// Human-readable reasons a topology fails the leaderless or leader-rooted
/// condition; empty when valid. Nodes are numbered from 1.
std::vector<std::string> leaderless_diagnostics(const CommTopology& topo);
std::vector<std::string> leader_rooted_diagnostics(const CommTopology& topo);

/// Weighted average of neighbor values seen by node i, including the leader
/// value when one is supplied and b_i > 0. Throws ConfigError if node i has
/// no information source.
Vec3d neighborhood_aggregate(const CommTopology& topo, int i, std::span<const Vec3d> values,
                             const std::optional<Vec3d>& leader_value = std::nullopt);

}  // namespace attsync
