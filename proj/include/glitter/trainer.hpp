#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "glitter/checkpoint.hpp"
#include "glitter/episode.hpp"
#include "glitter/model.hpp"

namespace glitter {

struct TrainConfig {
  int n_way = 5;
  int k_shot = 3;
  int q_queries = 10;
  int h = 2;          // local-sampling neighborhood size
  int c_common = 10;  // common-sampling budget per class
  int m = 2;          // absorbing-probability truncation depth
  int eta = 20;       // inner update steps
  double alpha = 0.1;
  double beta1 = 0.005;
  double beta2 = 0.005;
  int epochs = 500;
  int hidden_dim = 16;
  int d_a = 16;
  int d_max = 10;
  double dropout = 0.5;
  double weight_decay = 1e-4;
  std::uint64_t seed = 0;
  Setting setting = Setting::kSingleGraphDisjointLabel;
  bool first_order = true;
  bool normalize_scores = true;
  bool classic_maml = false;  // apply meta-steps from the pre-adaptation params
  double ratio_train = 0.8;
  double ratio_val = 0.1;
  double ratio_test = 0.1;
  int val_every = 50;
  int val_episodes = 20;
  int workers = 1;
};

// Enforces the constraints meta-training relies on (positive rates, eta >= 1,
// n_way >= 2). The per-episode operations below accept degenerate configs
// (zero rates, n_way == 1) so null-step identities stay exercisable.
void validate(const TrainConfig& cfg);

struct InnerTrace {
  std::vector<double> loss_structure;  // one entry per inner step
  std::vector<double> loss_support;
};

struct InnerResult {
  ParameterSet params;
  InnerTrace trace;
  TaskStructure task;
  Eigen::MatrixXd x_task;
};

// Per-episode adaptation: eta iterations of (build adjacency, step the
// structure parameters on the combined structure loss, rebuild, step the
// encoder on the support cross-entropy).
InnerResult inner_adapt(const Graph& g, const Episode& ep, ParameterSet params,
                        const TrainConfig& cfg, std::mt19937_64& rng);

// L_S at the given parameters: within-class influence loss plus the
// query/label mutual-information loss, both through the current adjacency.
double structure_loss(const TaskStructure& task, const Eigen::MatrixXd& x_task,
                      const StructureParams& sp, const EncoderParams& gp,
                      const TrainConfig& cfg,
                      const Eigen::MatrixXd* dropout_mask = nullptr);

struct MetaStepInfo {
  InnerTrace trace;
  double loss_query = 0.0;
  double query_accuracy = 0.0;
};

// Runs inner adaptation, then applies the two meta-steps from the adapted
// parameters: the encoder moves against the query cross-entropy gradient
// (plus weight decay), the structure parameters against the structure-loss
// gradient recomputed at the fully adapted pair.
ParameterSet meta_update(const Graph& g, const Episode& ep,
                         const ParameterSet& params, const TrainConfig& cfg,
                         std::mt19937_64& rng, MetaStepInfo* info = nullptr);

// Adapts a copy of the parameters on the episode, then scores the query set
// with an eval-mode forward pass (no dropout). The input parameters are never
// mutated.
double episode_accuracy(const Graph& g, const Episode& ep,
                        const ParameterSet& params, const TrainConfig& cfg,
                        std::mt19937_64& rng);

struct EpisodeRecord {
  int index = 0;
  std::vector<double> loss_structure;
  std::vector<double> loss_support;
  double loss_query = 0.0;
  double query_accuracy = 0.0;
};

struct TrainLog {
  std::vector<EpisodeRecord> episodes;
  std::vector<std::pair<int, double>> validations;  // (episodes seen, accuracy)
  double wall_seconds = 0.0;
};

// Sequential meta-training: one sampled episode per epoch, meta-update after
// each, periodic validation. Deterministic given (dataset, cfg).
std::pair<Checkpoint, TrainLog> train(const Dataset& ds, const TrainConfig& cfg);

const Graph& graph_by_id(const Dataset& ds, std::int32_t graph_id);

}  // namespace glitter
