#include "glitter/trainer.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "glitter/config.hpp"
#include "glitter/errors.hpp"
#include "glitter/rng.hpp"

namespace glitter {

void validate(const TrainConfig& cfg) {
  if (cfg.n_way < 2) throw ConfigError("n_way must be >= 2 for classification");
  if (cfg.k_shot < 1 || cfg.q_queries < 1)
    throw ConfigError("k_shot and q_queries must be >= 1");
  if (cfg.eta < 1) throw ConfigError("eta must be >= 1");
  if (!(cfg.alpha > 0.0) || !(cfg.beta1 > 0.0) || !(cfg.beta2 > 0.0))
    throw ConfigError("learning rates must be positive");
  if (cfg.h < 0 || cfg.c_common < 0 || cfg.m < 0)
    throw ConfigError("h, c_common and m must be >= 0");
  if (cfg.hidden_dim < 1 || cfg.d_a < 1 || cfg.d_max < 1)
    throw ConfigError("dimensions must be >= 1");
  if (cfg.dropout < 0.0 || cfg.dropout >= 1.0)
    throw ConfigError("dropout must be in [0, 1)");
  if (cfg.epochs < 0) throw ConfigError("epochs must be >= 0");
  if (!cfg.first_order)
    throw ConfigError(
        "first_order=false (meta-gradients through the inner trajectory) is "
        "not supported");
}

const Graph& graph_by_id(const Dataset& ds, std::int32_t graph_id) {
  for (const Graph& g : ds.graphs)
    if (g.graph_id == graph_id) return g;
  throw ArgumentError("graph " + std::to_string(graph_id) + " not in dataset");
}

namespace {

std::string trace_tail(const InnerTrace& trace) {
  std::ostringstream os;
  os << "structure-loss trace:";
  for (double v : trace.loss_structure) os << " " << v;
  os << "; support-loss trace:";
  for (double v : trace.loss_support) os << " " << v;
  return os.str();
}

}  // namespace

double structure_loss(const TaskStructure& task, const Eigen::MatrixXd& x_task,
                      const StructureParams& sp, const EncoderParams& gp,
                      const TrainConfig& cfg,
                      const Eigen::MatrixXd* dropout_mask) {
  EpisodeLossContext ctx{&task, x_task, cfg.m, cfg.normalize_scores,
                         dropout_mask};
  return loss_value(LossKind::kStructure, ctx, sp, gp);
}

InnerResult inner_adapt(const Graph& g, const Episode& ep, ParameterSet params,
                        const TrainConfig& cfg, std::mt19937_64& rng) {
  InnerResult r;
  r.task = assemble_task_nodes(g, ep, cfg.h, cfg.c_common);
  r.x_task = task_features(g, r.task);
  r.params = std::move(params);

  EpisodeLossContext ctx;
  ctx.task = &r.task;
  ctx.x_task = r.x_task;
  ctx.m = cfg.m;
  ctx.normalize_scores = cfg.normalize_scores;

  for (int step = 0; step < cfg.eta; ++step) {
    Eigen::MatrixXd mask_s =
        make_dropout_mask(r.task.size(), cfg.hidden_dim, cfg.dropout, rng);
    ctx.dropout_mask = &mask_s;
    LossGradients gs;
    try {
      gs = compute_gradients(LossKind::kStructure, ctx, r.params.s, r.params.g);
    } catch (const NumericalError& e) {
      throw TrainingError(std::string(e.what()) + " at inner step " +
                          std::to_string(step) + "; " + trace_tail(r.trace));
    }
    r.trace.loss_structure.push_back(gs.value);
    if (cfg.alpha != 0.0) axpy_inplace(r.params.s, gs.d_structure, -cfg.alpha);

    Eigen::MatrixXd mask_g =
        make_dropout_mask(r.task.size(), cfg.hidden_dim, cfg.dropout, rng);
    ctx.dropout_mask = &mask_g;
    LossGradients gg;
    try {
      gg = compute_gradients(LossKind::kSupport, ctx, r.params.s, r.params.g);
    } catch (const NumericalError& e) {
      throw TrainingError(std::string(e.what()) + " at inner step " +
                          std::to_string(step) + "; " + trace_tail(r.trace));
    }
    r.trace.loss_support.push_back(gg.value);
    if (cfg.alpha != 0.0) axpy_inplace(r.params.g, gg.d_encoder, -cfg.alpha);
  }
  return r;
}

namespace {

double query_accuracy_eval(const InnerResult& inner) {
  Eigen::MatrixXd a =
      build_adjacency(inner.task, inner.x_task, inner.params.s);
  Eigen::MatrixXd h = gcn_forward(a, inner.x_task, inner.params.g, nullptr);
  Eigen::MatrixXd probs = classify(h, inner.params.g);
  int correct = 0;
  for (std::size_t i = 0; i < inner.task.query_index.size(); ++i) {
    Eigen::Index best;
    probs.row(inner.task.query_index[i]).maxCoeff(&best);
    if (static_cast<int>(best) == inner.task.query_slots[i]) ++correct;
  }
  return static_cast<double>(correct) /
         static_cast<double>(inner.task.query_index.size());
}

}  // namespace

ParameterSet meta_update(const Graph& g, const Episode& ep,
                         const ParameterSet& params, const TrainConfig& cfg,
                         std::mt19937_64& rng, MetaStepInfo* info) {
  InnerResult inner = inner_adapt(g, ep, params, cfg, rng);

  EpisodeLossContext ctx;
  ctx.task = &inner.task;
  ctx.x_task = inner.x_task;
  ctx.m = cfg.m;
  ctx.normalize_scores = cfg.normalize_scores;

  Eigen::MatrixXd mask_q =
      make_dropout_mask(inner.task.size(), cfg.hidden_dim, cfg.dropout, rng);
  ctx.dropout_mask = &mask_q;
  LossGradients gq =
      compute_gradients(LossKind::kQuery, ctx, inner.params.s, inner.params.g);
  EncoderParams encoder_step = gq.d_encoder;
  if (cfg.weight_decay != 0.0)
    axpy_inplace(encoder_step, inner.params.g, cfg.weight_decay);

  Eigen::MatrixXd mask_s =
      make_dropout_mask(inner.task.size(), cfg.hidden_dim, cfg.dropout, rng);
  ctx.dropout_mask = &mask_s;
  LossGradients gs = compute_gradients(LossKind::kStructure, ctx,
                                       inner.params.s, inner.params.g);

  ParameterSet out;
  out.g = cfg.classic_maml ? params.g : inner.params.g;
  out.s = cfg.classic_maml ? params.s : inner.params.s;
  if (cfg.beta1 != 0.0) axpy_inplace(out.g, encoder_step, -cfg.beta1);
  if (cfg.beta2 != 0.0) axpy_inplace(out.s, gs.d_structure, -cfg.beta2);

  if (info) {
    info->trace = inner.trace;
    info->loss_query = gq.value;
    info->query_accuracy = query_accuracy_eval(inner);
  }
  return out;
}

double episode_accuracy(const Graph& g, const Episode& ep,
                        const ParameterSet& params, const TrainConfig& cfg,
                        std::mt19937_64& rng) {
  InnerResult inner = inner_adapt(g, ep, params, cfg, rng);
  return query_accuracy_eval(inner);
}

std::pair<Checkpoint, TrainLog> train(const Dataset& ds, const TrainConfig& cfg) {
  validate(cfg);
  Ratios ratios{cfg.ratio_train, cfg.ratio_val, cfg.ratio_test};
  SplitSpec split = make_split(ds, cfg.setting, ratios, cfg.seed);
  for (Phase p : {Phase::kTrain, Phase::kVal, Phase::kTest})
    if (static_cast<int>(split.classes(p).size()) < cfg.n_way)
      throw ConfigError("phase class set smaller than n_way");

  auto init_rng = substream(cfg.seed, streams::kInit);
  ParameterSet params;
  params.s = init_structure_params(ds.feature_dim, cfg.d_a, cfg.d_max, init_rng);
  params.g = init_encoder_params(ds.feature_dim, cfg.hidden_dim, cfg.n_way,
                                 init_rng);

  TrainLog log;
  const auto t0 = std::chrono::steady_clock::now();
  for (int e = 0; e < cfg.epochs; ++e) {
    auto rng = substream(cfg.seed, streams::kEpisode, static_cast<std::uint64_t>(e));
    Episode ep = sample_episode(ds, split, Phase::kTrain, cfg.n_way, cfg.k_shot,
                                cfg.q_queries, rng);
    MetaStepInfo info;
    params = meta_update(graph_by_id(ds, ep.graph_id), ep, params, cfg, rng,
                         &info);
    log.episodes.push_back({e, std::move(info.trace.loss_structure),
                            std::move(info.trace.loss_support), info.loss_query,
                            info.query_accuracy});

    if (cfg.val_every > 0 && (e + 1) % cfg.val_every == 0 &&
        cfg.val_episodes > 0) {
      double acc = 0.0;
      for (int v = 0; v < cfg.val_episodes; ++v) {
        auto vrng = substream(cfg.seed, streams::kEval,
                              (static_cast<std::uint64_t>(e + 1) << 20) |
                                  static_cast<std::uint64_t>(v));
        Episode vep = sample_episode(ds, split, Phase::kVal, cfg.n_way,
                                     cfg.k_shot, cfg.q_queries, vrng);
        acc += episode_accuracy(graph_by_id(ds, vep.graph_id), vep, params, cfg,
                                vrng);
      }
      log.validations.emplace_back(e + 1, acc / cfg.val_episodes);
    }
  }
  log.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  Checkpoint ckpt;
  ckpt.params = std::move(params);
  ckpt.config = train_config_to_kv(cfg);
  ckpt.config.emplace_back("feature_dim", std::to_string(ds.feature_dim));
  ckpt.rng_state = "seed:" + std::to_string(cfg.seed) +
                   ";episodes:" + std::to_string(cfg.epochs);
  return {std::move(ckpt), std::move(log)};
}

}  // namespace glitter
