#pragma once

#include <span>
#include <vector>

#include "glitter/episode.hpp"
#include "glitter/graph.hpp"
#include "glitter/params.hpp"

namespace glitter {

// The per-episode task structure: the extracted node set (support block first,
// then query block, then the sampled block in ascending id order), the pairwise
// shortest-path cache on the original graph, and the learned dense adjacency.
struct TaskStructure {
  std::vector<NodeId> node_list;
  Eigen::MatrixXi spd_cache;   // |V_T| x |V_T|
  Eigen::MatrixXd adjacency;   // empty until build_adjacency
  std::vector<int> support_index;                 // positions in node_list
  std::vector<int> query_index;
  std::vector<std::vector<int>> support_by_class; // per slot, positions
  std::vector<int> query_slots;                   // ground truth per query

  int size() const { return static_cast<int>(node_list.size()); }
};

// All nodes within h hops of any support node (distance 0 included, so the
// support set itself is always covered).
std::vector<NodeId> local_sample(const Graph& g, std::span<const NodeId> support,
                                 int h);

// Per class, the C candidates with the smallest summed shortest-path distance
// to that class's support nodes; ties break toward the smaller node id and
// unreachable candidates are never selected. Candidates exclude `exclude`.
std::vector<NodeId> common_sample(const Graph& g,
                                  const std::vector<std::vector<NodeId>>& support_by_class,
                                  int budget, std::span<const NodeId> exclude);

// Builds node_list = support || query || sorted extras and fills the SPD cache.
TaskStructure assemble_task_nodes(const Graph& g, const Episode& ep, int h,
                                  int budget);

// Feature rows of the task nodes, in node_list order.
Eigen::MatrixXd task_features(const Graph& g, const TaskStructure& task);

// Affinity edge weight from node features: the exponentiated negative distance
// between the two rectified, unit-normalized projections. Always in (0, 1].
double repr_edge_weight(const Eigen::VectorXd& x_i, const Eigen::VectorXd& x_j,
                        const StructureParams& p);

// Distance-bucket edge weight: sigmoid of the table entry for the pair's
// shortest-path distance. Finite distances clamp to the last regular bucket;
// unreachable pairs use the overflow bucket.
double struct_edge_weight(std::int32_t spd, const StructureParams& p);

int spd_bucket(std::int32_t spd, int d_max);
Eigen::MatrixXi bucket_matrix(const TaskStructure& task, int d_max);

// Dense directed adjacency over the task nodes: every entry (diagonal
// included) is the mean of the affinity and distance-bucket weights.
Eigen::MatrixXd build_adjacency(const TaskStructure& task,
                                const Eigen::MatrixXd& x_task,
                                const StructureParams& p);

inline constexpr double kNormGuard = 1e-8;

}  // namespace glitter
