#include "glitter/influence.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "glitter/errors.hpp"

namespace glitter {

AbsorbingChain build_absorbing_chain(const Eigen::MatrixXd& adjacency,
                                     std::span<const int> support_index) {
  if (support_index.empty())
    throw ArgumentError("build_absorbing_chain: no absorbing states");
  const int n = static_cast<int>(adjacency.rows());
  if (adjacency.cols() != n)
    throw ArgumentError("build_absorbing_chain: adjacency must be square");

  std::set<int> absorbing(support_index.begin(), support_index.end());
  for (int s : absorbing)
    if (s < 0 || s >= n)
      throw ArgumentError("build_absorbing_chain: support index out of range");

  AbsorbingChain chain;
  for (int i = 0; i < n; ++i)
    if (!absorbing.count(i)) chain.ordering.push_back(i);
  chain.t = static_cast<int>(chain.ordering.size());
  for (int s : absorbing) chain.ordering.push_back(s);

  chain.a_tilde = Eigen::MatrixXd::Zero(n, n);
  for (int ci = 0; ci < n; ++ci) {
    const int oi = chain.ordering[ci];
    if (ci >= chain.t) {
      chain.a_tilde(ci, ci) = 1.0;  // absorbing: one-hot on itself
      continue;
    }
    double s = adjacency.row(oi).sum();
    if (!(s > 0.0))
      throw ArgumentError("build_absorbing_chain: nonpositive row sum at node " +
                          std::to_string(oi));
    for (int cj = 0; cj < n; ++cj)
      chain.a_tilde(ci, cj) = adjacency(oi, chain.ordering[cj]) / s;
  }
  chain.q_block = chain.a_tilde.topLeftCorner(chain.t, chain.t);
  chain.r_block = chain.a_tilde.topRightCorner(chain.t, n - chain.t);
  return chain;
}

Eigen::MatrixXd exact_absorbing_probs(const AbsorbingChain& chain) {
  const int t = chain.t;
  if (t == 0) return Eigen::MatrixXd(0, chain.num_absorbing());
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(t, t) - chain.q_block;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14))
    throw NumericalError(
        "exact_absorbing_probs: I - Q numerically singular (rcond estimate " +
        std::to_string(rcond) + ")");
  return lu.solve(chain.r_block);
}

Eigen::MatrixXd truncated_absorbing_probs(const AbsorbingChain& chain, int m) {
  if (m < 0) throw ArgumentError("truncated_absorbing_probs: m must be >= 0");
  const int t = chain.t;
  if (t == 0) return Eigen::MatrixXd(0, chain.num_absorbing());
  Eigen::MatrixXd series = Eigen::MatrixXd::Identity(t, t);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(t, t);
  for (int h = 1; h <= m; ++h) {
    power = power * chain.q_block;
    series += power;
  }
  return series * chain.r_block;
}

double class_influence_loss(const Eigen::MatrixXd& h,
                            const std::vector<std::vector<int>>& class_members,
                            double norm_guard) {
  const int n = static_cast<int>(h.rows());
  if (n <= 1)
    throw ArgumentError("class_influence_loss: need at least two rows");
  const int num_classes = static_cast<int>(class_members.size());
  if (num_classes == 0)
    throw ArgumentError("class_influence_loss: no classes");

  double total = 0.0;
  for (const auto& members : class_members) {
    const double k = static_cast<double>(members.size());
    const double within_coef = (k - 2.0) / (n - 1.0);
    const double between_coef = (k - 1.0) / (n - 1.0);
    std::set<int> in_class(members.begin(), members.end());

    for (int j : members) {
      const double nj = std::max(h.row(j).squaredNorm(), norm_guard);
      double bracket = 0.0;
      for (int i : members)
        if (i != j) bracket += within_coef * h.row(j).dot(h.row(i)) / nj;
      for (int v = 0; v < n; ++v)
        if (!in_class.count(v)) bracket -= between_coef * h.row(j).dot(h.row(v)) / nj;
      total += bracket;
    }
  }
  return -total / num_classes;
}

GeometricMeanInfluence geometric_mean_influence(const Eigen::MatrixXd& probs,
                                                int row,
                                                std::span<const int> class_cols) {
  if (class_cols.empty())
    throw ArgumentError("geometric_mean_influence: empty class");
  double log_sum = 0.0;
  for (int c : class_cols) {
    double b = probs(row, c);
    if (!(b > 0.0)) return {0.0, true};
    log_sum += std::log(b);
  }
  return {std::exp(log_sum / static_cast<double>(class_cols.size())), false};
}

}  // namespace glitter
