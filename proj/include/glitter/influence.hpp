#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace glitter {

// Absorbing Markov chain over a task structure: support states absorb, all
// other states transition according to the row-normalized learned adjacency.
// States are reordered so the t non-absorbing states come first.
struct AbsorbingChain {
  std::vector<int> ordering;  // chain state -> original index
  Eigen::MatrixXd a_tilde;    // full transition matrix under the ordering
  Eigen::MatrixXd q_block;    // t x t, among non-absorbing states
  Eigen::MatrixXd r_block;    // t x |S|, into absorbing states
  int t = 0;

  int num_absorbing() const { return static_cast<int>(r_block.cols()); }
};

AbsorbingChain build_absorbing_chain(const Eigen::MatrixXd& adjacency,
                                     std::span<const int> support_index);

// B = (I - Q)^-1 R by dense LU. Row i gives the absorption distribution of
// non-absorbing state i over the absorbing states.
Eigen::MatrixXd exact_absorbing_probs(const AbsorbingChain& chain);

// Power-series estimate (sum_{h=0..m} Q^h) R, accumulated with a running
// product so no power beyond the current one is materialized. Elementwise
// nonnegative and bounded above by the exact probabilities.
Eigen::MatrixXd truncated_absorbing_probs(const AbsorbingChain& chain, int m);

// Within-class influence loss on representations H: rewards dot-product
// similarity (normalized by the row's squared norm) toward same-class support
// rows and penalizes it toward everything else, averaged over classes and
// negated. class_members holds row indices per class slot.
double class_influence_loss(const Eigen::MatrixXd& h,
                            const std::vector<std::vector<int>>& class_members,
                            double norm_guard = 1e-8);

struct GeometricMeanInfluence {
  double value = 0.0;
  bool hit_zero = false;
};

// Geometric mean (computed in log space) of one row's absorbing probabilities
// over a class's support columns. A zero influence short-circuits to 0.
GeometricMeanInfluence geometric_mean_influence(const Eigen::MatrixXd& probs,
                                                int row,
                                                std::span<const int> class_cols);

}  // namespace glitter
