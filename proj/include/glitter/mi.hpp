#pragma once

#include <Eigen/Dense>
#include <vector>

namespace glitter {

inline constexpr double kProbClip = 1e-8;

// Per-query distribution over the episode's class slots, derived from
// truncated absorbing probabilities.
struct QueryClassDistribution {
  Eigen::MatrixXd probs;  // |Q| x N, rows sum to 1 when normalized
  bool uniform_fallback = false;  // some query row had zero mass before clipping
};

// Aggregates each query row of the absorbing-probability estimate by class:
// the score for slot c is the summed probability of absorbing into any of
// c's support states. Rows are clipped below at kProbClip and (by default)
// normalized to sum 1; a row with no mass at all falls back to uniform.
QueryClassDistribution query_class_distribution(
    const Eigen::MatrixXd& btilde, const std::vector<int>& slot_of_absorbing,
    const std::vector<int>& query_rows, int num_slots, bool normalize = true);

// Negative mutual information between query nodes and slot labels:
//   sum_j pbar_j ln pbar_j - (1/|Q|) sum_ij p_ij ln p_ij
// Natural logarithm, with 0 ln 0 taken as 0. Requires normalized rows.
double mutual_info_loss(const QueryClassDistribution& dist);

}  // namespace glitter
