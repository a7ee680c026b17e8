#include "glitter/structure.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "glitter/errors.hpp"

namespace glitter {

std::vector<NodeId> local_sample(const Graph& g, std::span<const NodeId> support,
                                 int h) {
  if (h < 0) throw ArgumentError("local_sample: h must be >= 0");
  std::set<NodeId> out;
  for (NodeId s : support) {
    // depth-limited BFS
    std::vector<std::int32_t> depth(g.node_count, -1);
    std::deque<NodeId> frontier{s};
    depth[s] = 0;
    out.insert(s);
    while (!frontier.empty()) {
      NodeId u = frontier.front();
      frontier.pop_front();
      if (depth[u] == h) continue;
      for (NodeId v : g.neighbors[u]) {
        if (depth[v] < 0) {
          depth[v] = depth[u] + 1;
          out.insert(v);
          frontier.push_back(v);
        }
      }
    }
  }
  return {out.begin(), out.end()};
}

std::vector<NodeId> common_sample(
    const Graph& g, const std::vector<std::vector<NodeId>>& support_by_class,
    int budget, std::span<const NodeId> exclude) {
  if (budget < 0) throw ArgumentError("common_sample: budget must be >= 0");
  std::set<NodeId> excluded(exclude.begin(), exclude.end());
  std::set<NodeId> out;
  for (const auto& members : support_by_class) {
    std::vector<double> sums = sum_spd_to_targets(g, members);
    std::vector<std::pair<double, NodeId>> ranked;
    for (NodeId v = 0; v < g.node_count; ++v) {
      if (excluded.count(v)) continue;
      if (std::isinf(sums[v])) continue;
      ranked.emplace_back(sums[v], v);
    }
    std::sort(ranked.begin(), ranked.end());
    const int take = std::min<int>(budget, static_cast<int>(ranked.size()));
    for (int i = 0; i < take; ++i) out.insert(ranked[i].second);
  }
  return {out.begin(), out.end()};
}

TaskStructure assemble_task_nodes(const Graph& g, const Episode& ep, int h,
                                  int budget) {
  TaskStructure task;
  const int n = ep.n_way();
  const int k = ep.k_shot();

  std::vector<NodeId> support_flat = ep.support_flat();
  for (int slot = 0; slot < n; ++slot) {
    std::vector<int> idx;
    for (int j = 0; j < k; ++j) idx.push_back(slot * k + j);
    task.support_by_class.push_back(std::move(idx));
  }
  task.node_list = support_flat;
  for (int i = 0; i < n * k; ++i) task.support_index.push_back(i);
  for (std::size_t q = 0; q < ep.query.size(); ++q) {
    task.query_index.push_back(static_cast<int>(task.node_list.size()));
    task.node_list.push_back(ep.query[q]);
  }
  task.query_slots = ep.query_slots;

  std::set<NodeId> core(task.node_list.begin(), task.node_list.end());
  std::set<NodeId> extras;
  for (NodeId v : local_sample(g, support_flat, h))
    if (!core.count(v)) extras.insert(v);
  for (NodeId v : common_sample(g, ep.support, budget, task.node_list))
    if (!core.count(v)) extras.insert(v);
  task.node_list.insert(task.node_list.end(), extras.begin(), extras.end());

  task.spd_cache = spd_submatrix(g, task.node_list);
  return task;
}

Eigen::MatrixXd task_features(const Graph& g, const TaskStructure& task) {
  Eigen::MatrixXd x(task.size(), g.feature_dim());
  for (int i = 0; i < task.size(); ++i) x.row(i) = g.features.row(task.node_list[i]);
  return x;
}

int spd_bucket(std::int32_t spd, int d_max) {
  if (spd == kUnreachable) return d_max + 1;
  if (spd < 0) throw ArgumentError("spd_bucket: negative distance");
  return std::min<std::int32_t>(spd, d_max);
}

Eigen::MatrixXi bucket_matrix(const TaskStructure& task, int d_max) {
  Eigen::MatrixXi b(task.size(), task.size());
  for (int i = 0; i < task.size(); ++i)
    for (int j = 0; j < task.size(); ++j)
      b(i, j) = spd_bucket(task.spd_cache(i, j), d_max);
  return b;
}

namespace {

Eigen::VectorXd rectified_unit(const Eigen::MatrixXd& w,
                               const Eigen::VectorXd& x) {
  Eigen::VectorXd z = (w * x).cwiseMax(0.0);
  return z / std::max(z.norm(), kNormGuard);
}

}  // namespace

double repr_edge_weight(const Eigen::VectorXd& x_i, const Eigen::VectorXd& x_j,
                        const StructureParams& p) {
  Eigen::VectorXd u = rectified_unit(p.W1, x_i);
  Eigen::VectorXd v = rectified_unit(p.W2, x_j);
  return std::exp(-(u - v).norm());
}

double struct_edge_weight(std::int32_t spd, const StructureParams& p) {
  double z = p.psi_table(spd_bucket(spd, p.d_max), 0);
  return 1.0 / (1.0 + std::exp(-z));
}

Eigen::MatrixXd build_adjacency(const TaskStructure& task,
                                const Eigen::MatrixXd& x_task,
                                const StructureParams& p) {
  if (task.spd_cache.rows() != task.size())
    throw ArgumentError("build_adjacency: spd cache not populated");
  const int n = task.size();

  Eigen::MatrixXd zu = (x_task * p.W1.transpose()).cwiseMax(0.0);
  Eigen::MatrixXd zv = (x_task * p.W2.transpose()).cwiseMax(0.0);
  for (int i = 0; i < n; ++i) {
    zu.row(i) /= std::max(zu.row(i).norm(), kNormGuard);
    zv.row(i) /= std::max(zv.row(i).norm(), kNormGuard);
  }

  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double affinity = std::exp(-(zu.row(i) - zv.row(j)).norm());
      double z = p.psi_table(spd_bucket(task.spd_cache(i, j), p.d_max), 0);
      double structural = 1.0 / (1.0 + std::exp(-z));
      a(i, j) = 0.5 * (affinity + structural);
    }
  }
  return a;
}

}  // namespace glitter
