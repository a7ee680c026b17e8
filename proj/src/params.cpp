#include "glitter/params.hpp"

#include <cmath>

namespace glitter {

namespace {

Eigen::MatrixXd gaussian(int rows, int cols, double sigma,
                         std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, sigma);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

}  // namespace

StructureParams init_structure_params(int feature_dim, int d_a, int d_max,
                                      std::mt19937_64& rng) {
  StructureParams p;
  p.d_max = d_max;
  const double sigma = 1.0 / std::sqrt(static_cast<double>(feature_dim));
  p.W1 = gaussian(d_a, feature_dim, sigma, rng);
  p.W2 = gaussian(d_a, feature_dim, sigma, rng);
  p.psi_table.resize(d_max + 2, 1);
  for (int b = 0; b < d_max + 2; ++b) p.psi_table(b, 0) = 1.0 - b;
  return p;
}

EncoderParams init_encoder_params(int feature_dim, int hidden_dim,
                                  int num_slots, std::mt19937_64& rng) {
  EncoderParams p;
  p.gcn_W1 = gaussian(feature_dim, hidden_dim,
                      1.0 / std::sqrt(static_cast<double>(feature_dim)), rng);
  p.gcn_W2 = gaussian(hidden_dim, hidden_dim,
                      1.0 / std::sqrt(static_cast<double>(hidden_dim)), rng);
  p.clf_W = gaussian(hidden_dim, num_slots,
                     1.0 / std::sqrt(static_cast<double>(hidden_dim)), rng);
  p.clf_b = Eigen::MatrixXd::Zero(1, num_slots);
  return p;
}

std::vector<std::pair<std::string, Eigen::MatrixXd*>> named_tensors(
    StructureParams& p) {
  return {{"W1", &p.W1}, {"W2", &p.W2}, {"psi_table", &p.psi_table}};
}

std::vector<std::pair<std::string, Eigen::MatrixXd*>> named_tensors(
    EncoderParams& p) {
  return {{"gcn_W1", &p.gcn_W1},
          {"gcn_W2", &p.gcn_W2},
          {"clf_W", &p.clf_W},
          {"clf_b", &p.clf_b}};
}

std::vector<std::pair<std::string, Eigen::MatrixXd*>> named_tensors(
    ParameterSet& p) {
  auto out = named_tensors(p.s);
  for (auto& t : named_tensors(p.g)) out.push_back(t);
  return out;
}

void axpy_inplace(StructureParams& p, const StructureParams& g, double step) {
  p.W1 += step * g.W1;
  p.W2 += step * g.W2;
  p.psi_table += step * g.psi_table;
}

void axpy_inplace(EncoderParams& p, const EncoderParams& g, double step) {
  p.gcn_W1 += step * g.gcn_W1;
  p.gcn_W2 += step * g.gcn_W2;
  p.clf_W += step * g.clf_W;
  p.clf_b += step * g.clf_b;
}

StructureParams zeros_like(const StructureParams& p) {
  StructureParams z;
  z.d_max = p.d_max;
  z.W1 = Eigen::MatrixXd::Zero(p.W1.rows(), p.W1.cols());
  z.W2 = Eigen::MatrixXd::Zero(p.W2.rows(), p.W2.cols());
  z.psi_table = Eigen::MatrixXd::Zero(p.psi_table.rows(), 1);
  return z;
}

EncoderParams zeros_like(const EncoderParams& p) {
  EncoderParams z;
  z.gcn_W1 = Eigen::MatrixXd::Zero(p.gcn_W1.rows(), p.gcn_W1.cols());
  z.gcn_W2 = Eigen::MatrixXd::Zero(p.gcn_W2.rows(), p.gcn_W2.cols());
  z.clf_W = Eigen::MatrixXd::Zero(p.clf_W.rows(), p.clf_W.cols());
  z.clf_b = Eigen::MatrixXd::Zero(1, p.clf_b.cols());
  return z;
}

bool all_finite(const ParameterSet& p) {
  ParameterSet& mp = const_cast<ParameterSet&>(p);
  for (auto& [name, t] : named_tensors(mp))
    if (!t->allFinite()) return false;
  return true;
}

}  // namespace glitter
