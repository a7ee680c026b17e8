#include "glitter/mi.hpp"

#include <cmath>
#include <string>

#include "glitter/errors.hpp"

namespace glitter {

QueryClassDistribution query_class_distribution(
    const Eigen::MatrixXd& btilde, const std::vector<int>& slot_of_absorbing,
    const std::vector<int>& query_rows, int num_slots, bool normalize) {
  if (static_cast<Eigen::Index>(slot_of_absorbing.size()) != btilde.cols())
    throw ArgumentError("query_class_distribution: slot map size mismatch");
  for (int s : slot_of_absorbing)
    if (s < 0 || s >= num_slots)
      throw ArgumentError("query_class_distribution: slot out of range");

  QueryClassDistribution out;
  out.probs = Eigen::MatrixXd::Zero(query_rows.size(), num_slots);
  for (std::size_t q = 0; q < query_rows.size(); ++q) {
    for (Eigen::Index s = 0; s < btilde.cols(); ++s)
      out.probs(q, slot_of_absorbing[s]) += btilde(query_rows[q], s);
    if (out.probs.row(q).sum() <= 0.0) out.uniform_fallback = true;
    out.probs.row(q) = out.probs.row(q).cwiseMax(kProbClip);
    if (normalize) out.probs.row(q) /= out.probs.row(q).sum();
  }
  return out;
}

double mutual_info_loss(const QueryClassDistribution& dist) {
  const auto& p = dist.probs;
  const auto q = p.rows();
  if (q == 0) throw ArgumentError("mutual_info_loss: empty distribution");
  for (Eigen::Index i = 0; i < q; ++i)
    if (std::abs(p.row(i).sum() - 1.0) > 1e-6)
      throw ArgumentError("mutual_info_loss: row " + std::to_string(i) +
                          " is not normalized");

  auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };

  double marginal_term = 0.0;
  for (Eigen::Index j = 0; j < p.cols(); ++j)
    marginal_term += xlogx(p.col(j).mean());

  double conditional_term = 0.0;
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j) conditional_term += xlogx(p(i, j));
  conditional_term /= static_cast<double>(q);

  return marginal_term - conditional_term;
}

}  // namespace glitter
