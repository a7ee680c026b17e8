#include "glitter/eval.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <sstream>
#include <thread>

#include "glitter/checkpoint.hpp"
#include "glitter/errors.hpp"
#include "glitter/rng.hpp"
#include "glitter/tape.hpp"

namespace glitter {

EvalReport make_report(std::vector<double> per_rep, int episodes_per_rep,
                       std::string setting) {
  EvalReport r;
  r.per_repetition_accuracy = std::move(per_rep);
  r.episodes_per_repetition = episodes_per_rep;
  r.setting = std::move(setting);
  const auto n = r.per_repetition_accuracy.size();
  if (n > 0) {
    double sum = 0.0;
    for (double a : r.per_repetition_accuracy) sum += a;
    r.mean = sum / static_cast<double>(n);
    double var = 0.0;
    for (double a : r.per_repetition_accuracy)
      var += (a - r.mean) * (a - r.mean);
    r.stddev = std::sqrt(var / static_cast<double>(n));
  }
  return r;
}

namespace {

void check_compatible(const Checkpoint& ckpt, const Dataset& ds,
                      const TrainConfig& cfg) {
  auto want = [&](const std::string& key, const std::string& value) {
    std::string have = checkpoint_config_value(ckpt, key);
    if (have != value)
      throw SchemaError("checkpoint " + key + "=" + have +
                        " incompatible with requested " + key + "=" + value);
  };
  want("feature_dim", std::to_string(ds.feature_dim));
  want("n_way", std::to_string(cfg.n_way));
  want("hidden_dim", std::to_string(cfg.hidden_dim));
  want("d_a", std::to_string(cfg.d_a));
  want("d_max", std::to_string(cfg.d_max));
}

std::uint64_t eval_stream_index(int rep, int episode) {
  return (static_cast<std::uint64_t>(rep) << 32) |
         static_cast<std::uint64_t>(episode);
}

// Runs fn(episode_index) for one repetition, optionally across threads.
// Results are accumulated by index, so scheduling does not affect the mean.
double repetition_mean(int episodes, int workers,
                       const std::function<double(int)>& fn) {
  std::vector<double> acc(episodes, 0.0);
  if (workers <= 1) {
    for (int e = 0; e < episodes; ++e) acc[e] = fn(e);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int e = next.fetch_add(1); e < episodes; e = next.fetch_add(1))
        acc[e] = fn(e);
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  double sum = 0.0;
  for (double a : acc) sum += a;
  return sum / static_cast<double>(episodes);
}

}  // namespace

EvalReport evaluate(const Checkpoint& ckpt, const Dataset& ds,
                    const SplitSpec& split, const TrainConfig& cfg,
                    int repetitions, int episodes_per_rep, int workers) {
  check_compatible(ckpt, ds, cfg);
  std::vector<double> reps;
  for (int r = 0; r < repetitions; ++r) {
    double mean = repetition_mean(episodes_per_rep, workers, [&](int e) {
      auto rng = substream(cfg.seed, streams::kEval, eval_stream_index(r, e));
      Episode ep = sample_episode(ds, split, Phase::kTest, cfg.n_way,
                                  cfg.k_shot, cfg.q_queries, rng);
      return episode_accuracy(graph_by_id(ds, ep.graph_id), ep, ckpt.params,
                              cfg, rng);
    });
    reps.push_back(mean);
  }
  return make_report(std::move(reps), episodes_per_rep, to_string(split.setting));
}

double knn_baseline(const Episode& ep, const Eigen::MatrixXd& features, int k) {
  const int n = ep.n_way();
  const int total_support = n * ep.k_shot();
  if (k < 1 || k > total_support)
    throw ArgumentError("knn_baseline: k must be in [1, N*K]");

  std::vector<NodeId> support = ep.support_flat();
  auto cosine = [&](NodeId a, NodeId b) {
    double na = features.row(a).norm();
    double nb = features.row(b).norm();
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return features.row(a).dot(features.row(b)) / (na * nb);
  };

  int correct = 0;
  for (std::size_t qi = 0; qi < ep.query.size(); ++qi) {
    std::vector<int> order(support.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::vector<double> sim(support.size());
    for (std::size_t i = 0; i < support.size(); ++i)
      sim[i] = cosine(ep.query[qi], support[i]);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sim[a] > sim[b]; });

    std::vector<int> votes(n, 0);
    for (int i = 0; i < k; ++i) votes[order[i] / ep.k_shot()] += 1;
    int best = 0;
    for (int s = 1; s < n; ++s)
      if (votes[s] > votes[best]) best = s;  // ties keep the lowest slot
    if (best == ep.query_slots[qi]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ep.query.size());
}

EvalReport knn_evaluate(const Dataset& ds, const SplitSpec& split,
                        const TrainConfig& cfg, int k, int repetitions,
                        int episodes_per_rep) {
  std::vector<double> reps;
  for (int r = 0; r < repetitions; ++r) {
    double sum = 0.0;
    for (int e = 0; e < episodes_per_rep; ++e) {
      auto rng = substream(cfg.seed, streams::kEval, eval_stream_index(r, e));
      Episode ep = sample_episode(ds, split, Phase::kTest, cfg.n_way,
                                  cfg.k_shot, cfg.q_queries, rng);
      sum += knn_baseline(ep, graph_by_id(ds, ep.graph_id).features, k);
    }
    reps.push_back(sum / episodes_per_rep);
  }
  return make_report(std::move(reps), episodes_per_rep, to_string(split.setting));
}

Eigen::MatrixXd induced_unit_adjacency(const Graph& g,
                                       const TaskStructure& task) {
  const int n = task.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& nbrs = g.neighbors[task.node_list[i]];
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (std::binary_search(nbrs.begin(), nbrs.end(), task.node_list[j]))
        a(i, j) = 1.0;
    }
  }
  return a;
}

namespace {

// Tape graph for the prototypical loss: softmax over negative squared
// distances from query embeddings to class-mean support embeddings.
struct ProtoLoss {
  ad::Tape tape;
  int gw1 = -1, gw2 = -1;
  int loss = -1;
  int h = -1;
};

void build_proto_loss(ProtoLoss& b, const TaskStructure& task,
                      const Eigen::MatrixXd& a0, const Eigen::MatrixXd& x,
                      const EncoderParams& params,
                      const Eigen::MatrixXd* dropout_mask) {
  ad::Tape& t = b.tape;
  b.gw1 = t.leaf(params.gcn_W1);
  b.gw2 = t.leaf(params.gcn_W2);
  int xc = t.constant(x);
  int ahat = t.constant(row_normalize(a0));
  int h1 = t.relu(t.matmul(t.matmul(ahat, xc), b.gw1));
  if (dropout_mask) h1 = t.hadamard(h1, t.constant(*dropout_mask));
  b.h = t.matmul(t.matmul(ahat, h1), b.gw2);

  const int slots = static_cast<int>(task.support_by_class.size());
  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(slots, task.size());
  for (int s = 0; s < slots; ++s)
    for (int idx : task.support_by_class[s])
      avg(s, idx) = 1.0 / static_cast<double>(task.support_by_class[s].size());

  int prototypes = t.matmul(t.constant(avg), b.h);
  int hq = t.slice_rows(b.h, task.query_index);
  int gram = t.matmul(hq, t.transpose(prototypes));
  int q2 = t.diag_as_col(t.matmul(hq, t.transpose(hq)));
  int p2 = t.diag_as_col(t.matmul(prototypes, t.transpose(prototypes)));
  int d2 = t.add_rowvec(t.add_colvec(t.scale(gram, -2.0), q2), t.transpose(p2));
  int probs = t.softmax_rows(t.scale(d2, -1.0));

  std::vector<std::pair<int, int>> cells;
  for (std::size_t i = 0; i < task.query_index.size(); ++i)
    cells.emplace_back(static_cast<int>(i), task.query_slots[i]);
  int picked = t.pick(probs, cells);
  b.loss = t.scale(t.sum_all(t.loge(t.clip_min(picked, 1e-12))), -1.0);
}

double proto_episode_accuracy(const Graph& g, const Episode& ep,
                              const EncoderParams& params,
                              const TrainConfig& cfg) {
  TaskStructure task = assemble_task_nodes(g, ep, cfg.h, cfg.c_common);
  Eigen::MatrixXd x = task_features(g, task);
  Eigen::MatrixXd a0 = induced_unit_adjacency(g, task);
  Eigen::MatrixXd h = gcn_forward(a0, x, params, nullptr);

  const int slots = static_cast<int>(task.support_by_class.size());
  Eigen::MatrixXd prototypes(slots, h.cols());
  for (int s = 0; s < slots; ++s) {
    prototypes.row(s).setZero();
    for (int idx : task.support_by_class[s]) prototypes.row(s) += h.row(idx);
    prototypes.row(s) /= static_cast<double>(task.support_by_class[s].size());
  }

  int correct = 0;
  for (std::size_t i = 0; i < task.query_index.size(); ++i) {
    int best = 0;
    double best_d = (h.row(task.query_index[i]) - prototypes.row(0)).squaredNorm();
    for (int s = 1; s < slots; ++s) {
      double d = (h.row(task.query_index[i]) - prototypes.row(s)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = s;
      }
    }
    if (best == task.query_slots[i]) ++correct;
  }
  return static_cast<double>(correct) /
         static_cast<double>(task.query_index.size());
}

}  // namespace

EncoderParams protonet_train(const Dataset& ds, const SplitSpec& split,
                             const TrainConfig& cfg, double lr,
                             double weight_decay) {
  auto init_rng = substream(cfg.seed, streams::kInit, 1);
  EncoderParams params = init_encoder_params(ds.feature_dim, cfg.hidden_dim,
                                             cfg.n_way, init_rng);
  for (int e = 0; e < cfg.epochs; ++e) {
    auto rng = substream(cfg.seed, streams::kEpisode, static_cast<std::uint64_t>(e));
    Episode ep = sample_episode(ds, split, Phase::kTrain, cfg.n_way, cfg.k_shot,
                                cfg.q_queries, rng);
    const Graph& g = graph_by_id(ds, ep.graph_id);
    TaskStructure task = assemble_task_nodes(g, ep, cfg.h, cfg.c_common);
    Eigen::MatrixXd x = task_features(g, task);
    Eigen::MatrixXd a0 = induced_unit_adjacency(g, task);
    Eigen::MatrixXd mask =
        make_dropout_mask(task.size(), cfg.hidden_dim, cfg.dropout, rng);

    ProtoLoss b;
    build_proto_loss(b, task, a0, x, params, &mask);
    b.tape.backward(b.loss);
    Eigen::MatrixXd g1 = b.tape.grad(b.gw1) + weight_decay * params.gcn_W1;
    Eigen::MatrixXd g2 = b.tape.grad(b.gw2) + weight_decay * params.gcn_W2;
    if (!g1.allFinite() || !g2.allFinite())
      throw TrainingError("prototypical baseline: non-finite gradient at episode " +
                          std::to_string(e));
    params.gcn_W1 -= lr * g1;
    params.gcn_W2 -= lr * g2;
  }
  return params;
}

EvalReport protonet_evaluate(const EncoderParams& params, const Dataset& ds,
                             const SplitSpec& split, const TrainConfig& cfg,
                             int repetitions, int episodes_per_rep) {
  std::vector<double> reps;
  for (int r = 0; r < repetitions; ++r) {
    double sum = 0.0;
    for (int e = 0; e < episodes_per_rep; ++e) {
      auto rng = substream(cfg.seed, streams::kEval, eval_stream_index(r, e));
      Episode ep = sample_episode(ds, split, Phase::kTest, cfg.n_way,
                                  cfg.k_shot, cfg.q_queries, rng);
      sum += proto_episode_accuracy(graph_by_id(ds, ep.graph_id), ep, params, cfg);
    }
    reps.push_back(sum / episodes_per_rep);
  }
  return make_report(std::move(reps), episodes_per_rep, to_string(split.setting));
}

std::string format_report(const EvalReport& report) {
  std::ostringstream os;
  os << "setting: " << report.setting << "\n";
  os << "episodes per repetition: " << report.episodes_per_repetition << "\n";
  os << "repetition accuracies:";
  for (double a : report.per_repetition_accuracy) os << " " << a;
  os << "\n";
  os << "mean: " << report.mean << "  std: " << report.stddev << "\n";
  return os.str();
}

}  // namespace glitter
