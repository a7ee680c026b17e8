#pragma once

#include <string>
#include <vector>

#include "glitter/trainer.hpp"

namespace glitter {

struct EvalReport {
  std::vector<double> per_repetition_accuracy;
  double mean = 0.0;
  double stddev = 0.0;  // population std over repetition means
  int episodes_per_repetition = 0;
  std::string setting;
};

EvalReport make_report(std::vector<double> per_rep, int episodes_per_rep,
                       std::string setting);

// Episodic meta-test evaluation: each test episode adapts a copy of the
// checkpoint parameters, then scores the query set with an eval-mode forward.
// Repetitions differ only in their episode-sampling substream. The checkpoint
// is never mutated. `workers` > 1 evaluates episodes of a repetition in
// parallel; per-episode substreams keep the result identical either way.
EvalReport evaluate(const Checkpoint& ckpt, const Dataset& ds,
                    const SplitSpec& split, const TrainConfig& cfg,
                    int repetitions, int episodes_per_rep, int workers = 1);

// Majority vote among the k support nodes closest in cosine similarity on raw
// features; vote ties resolve to the lowest slot.
double knn_baseline(const Episode& ep, const Eigen::MatrixXd& features, int k);

EvalReport knn_evaluate(const Dataset& ds, const SplitSpec& split,
                        const TrainConfig& cfg, int k, int repetitions,
                        int episodes_per_rep);

// Prototypical baseline: the same two-layer encoder run on the task node set
// with its induced unit-weight adjacency from the original graph (no learned
// structure). Episodic training against the query cross-entropy of softmax
// over negative squared prototype distances; consumes the same episode
// streams as meta-training for paired comparison.
EncoderParams protonet_train(const Dataset& ds, const SplitSpec& split,
                             const TrainConfig& cfg, double lr = 0.005,
                             double weight_decay = 0.0005);

EvalReport protonet_evaluate(const EncoderParams& params, const Dataset& ds,
                             const SplitSpec& split, const TrainConfig& cfg,
                             int repetitions, int episodes_per_rep);

// Unit-weight adjacency induced on the task nodes by the original graph edges.
Eigen::MatrixXd induced_unit_adjacency(const Graph& g, const TaskStructure& task);

std::string format_report(const EvalReport& report);

}  // namespace glitter
