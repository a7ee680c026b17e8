#pragma once

#include <random>
#include <span>

#include "glitter/params.hpp"
#include "glitter/structure.hpp"

namespace glitter {

// Inverted dropout: entries are 1/(1-rate) with probability 1-rate, else 0,
// so the eval-mode forward needs no rescaling.
Eigen::MatrixXd make_dropout_mask(Eigen::Index rows, Eigen::Index cols,
                                  double rate, std::mt19937_64& rng);

// Two-layer graph encoder over the learned adjacency: row-normalize, rectified
// first layer (with optional dropout mask), linear second layer.
Eigen::MatrixXd gcn_forward(const Eigen::MatrixXd& adjacency,
                            const Eigen::MatrixXd& x, const EncoderParams& p,
                            const Eigen::MatrixXd* dropout_mask = nullptr);

// Row-wise softmax of H * clf_W + clf_b.
Eigen::MatrixXd classify(const Eigen::MatrixXd& h, const EncoderParams& p);

// Sum (not mean) of negative log-probabilities at the given rows and slots,
// with the log argument clipped below at 1e-12.
double cross_entropy(const Eigen::MatrixXd& distributions,
                     std::span<const int> rows, std::span<const int> slot_labels);

enum class LossKind {
  kSupport,         // cross-entropy on support rows; adjacency held constant
  kQuery,           // cross-entropy on query rows; adjacency held constant
  kInfluence,       // within-class influence loss through the learned adjacency
  kMutualInfo,      // query/label mutual information through the absorbing chain
  kStructure,       // kInfluence + kMutualInfo
  kQuadraticProbe,  // 0.5 * sum of squares of every parameter, for plumbing checks
};

struct EpisodeLossContext {
  const TaskStructure* task = nullptr;
  Eigen::MatrixXd x_task;                         // |V_T| x d
  int m = 2;                                      // truncation depth
  bool normalize_scores = true;                   // normalize per-query class scores
  const Eigen::MatrixXd* dropout_mask = nullptr;  // null = eval mode
};

struct LossGradients {
  double value = 0.0;
  StructureParams d_structure;
  EncoderParams d_encoder;
};

double loss_value(LossKind kind, const EpisodeLossContext& ctx,
                  const StructureParams& sp, const EncoderParams& gp);

// End-to-end gradients of the requested loss. Structure losses differentiate
// through the adjacency, the chain truncation and the encoder; the two
// classification losses treat the adjacency as a constant and flow into the
// encoder/classifier parameters only.
LossGradients compute_gradients(LossKind kind, const EpisodeLossContext& ctx,
                                const StructureParams& sp,
                                const EncoderParams& gp);

}  // namespace glitter
