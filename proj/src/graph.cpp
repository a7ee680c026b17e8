#include "glitter/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "glitter/errors.hpp"

namespace glitter {

Graph make_graph(std::int32_t graph_id, std::int32_t node_count,
                 std::vector<std::pair<NodeId, NodeId>> edges,
                 Eigen::MatrixXd features, std::vector<std::int32_t> labels) {
  if (node_count < 0) throw ArgumentError("node_count must be nonnegative");
  if (features.rows() != node_count)
    throw ArgumentError("feature row count " + std::to_string(features.rows()) +
                        " does not match node count " +
                        std::to_string(node_count));
  if (!features.allFinite())
    throw ArgumentError("graph features contain NaN or Inf");
  if (labels.empty()) labels.assign(node_count, kNoLabel);
  if (static_cast<std::int32_t>(labels.size()) != node_count)
    throw ArgumentError("label count does not match node count");

  for (auto& [u, v] : edges) {
    if (u < 0 || u >= node_count || v < 0 || v >= node_count)
      throw ArgumentError("edge endpoint out of range");
    if (u == v) throw ArgumentError("self-loop edges are not allowed");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Graph g;
  g.graph_id = graph_id;
  g.node_count = node_count;
  g.edges = std::move(edges);
  g.features = std::move(features);
  g.labels = std::move(labels);
  g.neighbors.resize(node_count);
  for (const auto& [u, v] : g.edges) {
    g.neighbors[u].push_back(v);
    g.neighbors[v].push_back(u);
  }
  for (auto& nbrs : g.neighbors) std::sort(nbrs.begin(), nbrs.end());
  return g;
}

DistanceVector bfs_spd(const Graph& g, NodeId source) {
  if (source < 0 || source >= g.node_count)
    throw ArgumentError("bfs_spd: source " + std::to_string(source) +
                        " out of range");
  DistanceVector out;
  out.source = source;
  out.dist.assign(g.node_count, kUnreachable);
  out.dist[source] = 0;
  std::deque<NodeId> frontier{source};
  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop_front();
    for (NodeId v : g.neighbors[u]) {
      if (out.dist[v] == kUnreachable) {
        out.dist[v] = out.dist[u] + 1;
        frontier.push_back(v);
      }
    }
  }
  return out;
}

Eigen::MatrixXi spd_submatrix(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<NodeId> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ArgumentError("spd_submatrix: duplicate node ids");

  const int k = static_cast<int>(nodes.size());
  Eigen::MatrixXi spd(k, k);
  for (int i = 0; i < k; ++i) {
    DistanceVector d = bfs_spd(g, nodes[i]);
    for (int j = 0; j < k; ++j) spd(i, j) = d.dist[nodes[j]];
  }
  return spd;
}

std::vector<double> sum_spd_to_targets(const Graph& g,
                                       std::span<const NodeId> targets) {
  if (targets.empty())
    throw ArgumentError("sum_spd_to_targets: empty target set");
  std::vector<double> out(g.node_count, 0.0);
  for (NodeId t : targets) {
    DistanceVector d = bfs_spd(g, t);
    for (NodeId v = 0; v < g.node_count; ++v) {
      if (d.dist[v] == kUnreachable)
        out[v] = std::numeric_limits<double>::infinity();
      else
        out[v] += d.dist[v];
    }
  }
  return out;
}

Eigen::MatrixXd row_normalize(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw ArgumentError("row_normalize: matrix must be square");
  if ((m.array() < 0.0).any())
    throw ArgumentError("row_normalize: negative entry");
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double s = m.row(i).sum();
    if (s > 0.0) {
      out.row(i) = m.row(i) / s;
    } else {
      out.row(i).setZero();
      out(i, i) = 1.0;
    }
  }
  return out;
}

}  // namespace glitter
