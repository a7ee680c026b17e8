#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace glitter {

// Parameters of the task-structure learner: two feature projections for the
// affinity edge weight and a lookup table over shortest-path-distance buckets
// (0..d_max plus one bucket for unreachable pairs).
struct StructureParams {
  Eigen::MatrixXd W1;         // d_a x d
  Eigen::MatrixXd W2;         // d_a x d
  Eigen::MatrixXd psi_table;  // (d_max + 2) x 1
  int d_max = 10;
};

// Parameters of the two-layer graph encoder and the slot classifier.
struct EncoderParams {
  Eigen::MatrixXd gcn_W1;  // d x hidden
  Eigen::MatrixXd gcn_W2;  // hidden x hidden
  Eigen::MatrixXd clf_W;   // hidden x N
  Eigen::MatrixXd clf_b;   // 1 x N
};

struct ParameterSet {
  StructureParams s;
  EncoderParams g;
};

// W1, W2 ~ N(0, 1/sqrt(d)); psi bucket b starts at 1 - b so edge weights
// decrease with distance before any learning happens.
StructureParams init_structure_params(int feature_dim, int d_a, int d_max,
                                      std::mt19937_64& rng);
EncoderParams init_encoder_params(int feature_dim, int hidden_dim, int num_slots,
                                  std::mt19937_64& rng);

// Stable-order named views, used by serialization, updates and gradient checks.
std::vector<std::pair<std::string, Eigen::MatrixXd*>> named_tensors(
    StructureParams& p);
std::vector<std::pair<std::string, Eigen::MatrixXd*>> named_tensors(
    EncoderParams& p);
std::vector<std::pair<std::string, Eigen::MatrixXd*>> named_tensors(
    ParameterSet& p);

// p -= step * g, tensor by tensor.
void axpy_inplace(StructureParams& p, const StructureParams& g, double step);
void axpy_inplace(EncoderParams& p, const EncoderParams& g, double step);

StructureParams zeros_like(const StructureParams& p);
EncoderParams zeros_like(const EncoderParams& p);

bool all_finite(const ParameterSet& p);

}  // namespace glitter
