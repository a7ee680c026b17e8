#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace glitter {

using NodeId = std::int32_t;

// Sentinel distance for unreachable pairs; strictly larger than any achievable
// path length, so finite distances compare naturally against it.
inline constexpr std::int32_t kUnreachable =
    std::numeric_limits<std::int32_t>::max();

inline constexpr std::int32_t kNoLabel = -1;

// Undirected node-attributed graph with unit edge weights. Immutable after
// construction; all operations on it are pure and safe to call concurrently.
struct Graph {
  std::int32_t graph_id = 0;
  std::int32_t node_count = 0;
  std::vector<std::pair<NodeId, NodeId>> edges;  // deduplicated, u < v
  Eigen::MatrixXd features;                      // node_count x feature_dim
  std::vector<std::int32_t> labels;              // class id, or kNoLabel
  std::vector<std::vector<NodeId>> neighbors;    // symmetric adjacency lists

  int feature_dim() const { return static_cast<int>(features.cols()); }
};

// Validates invariants (endpoints in range, no self-loops, finite features,
// label/feature row counts) and builds the symmetric neighbor index.
Graph make_graph(std::int32_t graph_id, std::int32_t node_count,
                 std::vector<std::pair<NodeId, NodeId>> edges,
                 Eigen::MatrixXd features, std::vector<std::int32_t> labels);

struct DistanceVector {
  NodeId source = 0;
  std::vector<std::int32_t> dist;  // dist[source] == 0; kUnreachable if no path
};

// Exact unweighted shortest-path distances from `source`.
DistanceVector bfs_spd(const Graph& g, NodeId source);

// Pairwise shortest-path distances among `nodes` on the original graph.
// Symmetric with zero diagonal; entries may be kUnreachable.
Eigen::MatrixXi spd_submatrix(const Graph& g, std::span<const NodeId> nodes);

// out[v] = sum over targets of SPD(v, target); +infinity when any target is
// unreachable from v, so disconnected candidates always rank last.
std::vector<double> sum_spd_to_targets(const Graph& g,
                                       std::span<const NodeId> targets);

// Divides each row of a nonnegative square matrix by its sum. All-zero rows
// become one-hot self-transitions so the result is always row-stochastic.
Eigen::MatrixXd row_normalize(const Eigen::MatrixXd& m);

}  // namespace glitter
