#include "glitter/model.hpp"

#include <cmath>
#include <set>
#include <string>

#include "glitter/errors.hpp"
#include "glitter/graph.hpp"
#include "glitter/mi.hpp"
#include "glitter/tape.hpp"

namespace glitter {

Eigen::MatrixXd make_dropout_mask(Eigen::Index rows, Eigen::Index cols,
                                  double rate, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const double keep = 1.0 - rate;
  Eigen::MatrixXd mask(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      mask(i, j) = coin(rng) < keep ? 1.0 / keep : 0.0;
  return mask;
}

Eigen::MatrixXd gcn_forward(const Eigen::MatrixXd& adjacency,
                            const Eigen::MatrixXd& x, const EncoderParams& p,
                            const Eigen::MatrixXd* dropout_mask) {
  if (adjacency.rows() != x.rows())
    throw ArgumentError("gcn_forward: adjacency/feature row mismatch");
  if (x.cols() != p.gcn_W1.rows())
    throw ArgumentError("gcn_forward: feature dim does not match gcn_W1");
  Eigen::MatrixXd ahat = row_normalize(adjacency);
  Eigen::MatrixXd h1 = ((ahat * x) * p.gcn_W1).cwiseMax(0.0);
  if (dropout_mask) {
    if (dropout_mask->rows() != h1.rows() || dropout_mask->cols() != h1.cols())
      throw ArgumentError("gcn_forward: dropout mask shape mismatch");
    h1 = h1.cwiseProduct(*dropout_mask);
  }
  return (ahat * h1) * p.gcn_W2;
}

Eigen::MatrixXd classify(const Eigen::MatrixXd& h, const EncoderParams& p) {
  if (h.cols() != p.clf_W.rows())
    throw ArgumentError("classify: hidden dim does not match clf_W");
  Eigen::MatrixXd logits = h * p.clf_W;
  logits.rowwise() += p.clf_b.row(0);
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    Eigen::RowVectorXd e = (logits.row(i).array() - logits.row(i).maxCoeff()).exp();
    out.row(i) = e / e.sum();
  }
  return out;
}

double cross_entropy(const Eigen::MatrixXd& distributions,
                     std::span<const int> rows,
                     std::span<const int> slot_labels) {
  if (rows.empty()) throw ArgumentError("cross_entropy: empty selection");
  if (rows.size() != slot_labels.size())
    throw ArgumentError("cross_entropy: rows/labels size mismatch");
  double loss = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (slot_labels[i] < 0 || slot_labels[i] >= distributions.cols())
      throw ArgumentError("cross_entropy: slot label out of range");
    loss -= std::log(std::max(distributions(rows[i], slot_labels[i]), 1e-12));
  }
  return loss;
}

namespace {

using ad::Tape;

struct ParamNodes {
  int w1 = -1, w2 = -1, psi = -1;
  int gw1 = -1, gw2 = -1, cw = -1, cb = -1;
};

int adjacency_on_tape(Tape& t, const EpisodeLossContext& ctx,
                      const StructureParams& sp, ParamNodes& pn) {
  pn.w1 = t.leaf(sp.W1);
  pn.w2 = t.leaf(sp.W2);
  pn.psi = t.leaf(sp.psi_table);
  int x = t.constant(ctx.x_task);
  int u = t.l2_normalize_rows(t.relu(t.matmul(x, t.transpose(pn.w1))), kNormGuard);
  int v = t.l2_normalize_rows(t.relu(t.matmul(x, t.transpose(pn.w2))), kNormGuard);
  int affinity = t.exp_neg_pairwise_dist(u, v, kNormGuard);
  int structural =
      t.sigmoid(t.gather_table(pn.psi, bucket_matrix(*ctx.task, sp.d_max)));
  return t.scale(t.add(affinity, structural), 0.5);
}

int encoder_on_tape(Tape& t, int adjacency, const EpisodeLossContext& ctx,
                    const EncoderParams& gp, ParamNodes& pn) {
  pn.gw1 = t.leaf(gp.gcn_W1);
  pn.gw2 = t.leaf(gp.gcn_W2);
  int x = t.constant(ctx.x_task);
  int ahat = t.row_normalize(adjacency);
  int h1 = t.relu(t.matmul(t.matmul(ahat, x), pn.gw1));
  if (ctx.dropout_mask) h1 = t.hadamard(h1, t.constant(*ctx.dropout_mask));
  return t.matmul(t.matmul(ahat, h1), pn.gw2);
}

// Constant coefficient matrix of the within-class influence loss: entry (j, i)
// multiplies h_j . h_i / ||h_j||^2 in the summed bracket for support row j.
Eigen::MatrixXd influence_weights(const TaskStructure& task) {
  const int n = task.size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const auto& members : task.support_by_class) {
    const double k = static_cast<double>(members.size());
    const double within = (k - 2.0) / (n - 1.0);
    const double between = (k - 1.0) / (n - 1.0);
    std::set<int> in_class(members.begin(), members.end());
    for (int j : members) {
      for (int i : members)
        if (i != j) w(j, i) += within;
      for (int v = 0; v < n; ++v)
        if (!in_class.count(v)) w(j, v) -= between;
    }
  }
  return w;
}

int influence_loss_on_tape(Tape& t, int h, const TaskStructure& task) {
  if (task.size() <= 1)
    throw ArgumentError("influence loss: need at least two task nodes");
  int gram = t.matmul(h, t.transpose(h));
  int norms = t.clip_min(t.diag_as_col(gram), 1e-8);
  int scaled = t.scale_rows(gram, t.reciprocal(norms));
  int weighted = t.hadamard(scaled, t.constant(influence_weights(task)));
  const double n_classes = static_cast<double>(task.support_by_class.size());
  return t.scale(t.sum_all(weighted), -1.0 / n_classes);
}

int mi_loss_on_tape(Tape& t, int adjacency, const EpisodeLossContext& ctx) {
  const TaskStructure& task = *ctx.task;
  const int n = task.size();
  std::set<int> absorbing(task.support_index.begin(), task.support_index.end());

  std::vector<int> non_absorbing;
  for (int i = 0; i < n; ++i)
    if (!absorbing.count(i)) non_absorbing.push_back(i);
  std::vector<int> absorbing_order(absorbing.begin(), absorbing.end());
  const int chain_t = static_cast<int>(non_absorbing.size());

  // Blocks of the absorbing chain: non-absorbing rows of A normalized over all
  // columns, then split by destination.
  int rows_na = t.slice_rows(adjacency, non_absorbing);
  int normalized = t.row_normalize(rows_na);
  std::vector<int> na_cols(non_absorbing.begin(), non_absorbing.end());
  std::vector<int> abs_cols(absorbing_order.begin(), absorbing_order.end());
  int q_block = t.slice_cols(normalized, na_cols);
  int r_block = t.slice_cols(normalized, abs_cols);

  int series = t.constant(Eigen::MatrixXd::Identity(chain_t, chain_t));
  int power = series;
  for (int h = 1; h <= ctx.m; ++h) {
    power = t.matmul(power, q_block);
    series = t.add(series, power);
  }
  int btilde = t.matmul(series, r_block);

  // Positions of the query nodes within the non-absorbing ordering.
  std::vector<int> query_pos;
  for (int qi : task.query_index) {
    auto it = std::find(non_absorbing.begin(), non_absorbing.end(), qi);
    query_pos.push_back(static_cast<int>(it - non_absorbing.begin()));
  }
  int bq = t.slice_rows(btilde, query_pos);

  // Class aggregation: 0/1 map from absorbing state to slot.
  const int slots = static_cast<int>(task.support_by_class.size());
  Eigen::MatrixXd slot_map =
      Eigen::MatrixXd::Zero(absorbing_order.size(), slots);
  for (int s = 0; s < slots; ++s)
    for (int idx : task.support_by_class[s]) {
      auto it = std::find(absorbing_order.begin(), absorbing_order.end(), idx);
      slot_map(it - absorbing_order.begin(), s) = 1.0;
    }
  int scores = t.matmul(bq, t.constant(slot_map));
  int clipped = t.clip_min(scores, kProbClip);
  int p = ctx.normalize_scores ? t.row_normalize(clipped) : clipped;

  const double q_count = static_cast<double>(task.query_index.size());
  int averager = t.constant(Eigen::MatrixXd::Constant(1, task.query_index.size(),
                                                      1.0 / q_count));
  int pbar = t.matmul(averager, p);
  int marginal = t.sum_all(t.hadamard(pbar, t.loge(pbar)));
  int conditional = t.scale(t.sum_all(t.hadamard(p, t.loge(p))), 1.0 / q_count);
  return t.sub(marginal, conditional);
}

int ce_loss_on_tape(Tape& t, int h, const EncoderParams& gp, ParamNodes& pn,
                    const std::vector<int>& rows, const std::vector<int>& labels) {
  pn.cw = t.leaf(gp.clf_W);
  pn.cb = t.leaf(gp.clf_b);
  int logits = t.add_rowvec(t.matmul(h, pn.cw), pn.cb);
  int probs = t.softmax_rows(logits);
  std::vector<std::pair<int, int>> cells;
  for (std::size_t i = 0; i < rows.size(); ++i)
    cells.emplace_back(rows[i], labels[i]);
  int picked = t.pick(probs, cells);
  return t.scale(t.sum_all(t.loge(t.clip_min(picked, 1e-12))), -1.0);
}

void support_rows_labels(const TaskStructure& task, std::vector<int>& rows,
                         std::vector<int>& labels) {
  for (std::size_t s = 0; s < task.support_by_class.size(); ++s)
    for (int idx : task.support_by_class[s]) {
      rows.push_back(idx);
      labels.push_back(static_cast<int>(s));
    }
}

struct BuiltLoss {
  Tape tape;
  ParamNodes pn;
  int loss = -1;
};

void build_loss(BuiltLoss& b, LossKind kind, const EpisodeLossContext& ctx,
                const StructureParams& sp, const EncoderParams& gp) {
  Tape& t = b.tape;
  ParamNodes& pn = b.pn;

  if (kind == LossKind::kQuadraticProbe) {
    pn.w1 = t.leaf(sp.W1);
    pn.w2 = t.leaf(sp.W2);
    pn.psi = t.leaf(sp.psi_table);
    pn.gw1 = t.leaf(gp.gcn_W1);
    pn.gw2 = t.leaf(gp.gcn_W2);
    pn.cw = t.leaf(gp.clf_W);
    pn.cb = t.leaf(gp.clf_b);
    int acc = -1;
    for (int id : {pn.w1, pn.w2, pn.psi, pn.gw1, pn.gw2, pn.cw, pn.cb}) {
      int sq = t.sum_all(t.hadamard(id, id));
      acc = acc < 0 ? sq : t.add(acc, sq);
    }
    b.loss = t.scale(acc, 0.5);
    return;
  }

  if (ctx.task == nullptr) throw ArgumentError("loss context has no task");

  switch (kind) {
    case LossKind::kSupport:
    case LossKind::kQuery: {
      // Classification losses update the encoder only; the adjacency built
      // from the structure parameters enters as a constant.
      int a = b.tape.constant(build_adjacency(*ctx.task, ctx.x_task, sp));
      int h = encoder_on_tape(t, a, ctx, gp, pn);
      std::vector<int> rows, labels;
      if (kind == LossKind::kSupport) {
        support_rows_labels(*ctx.task, rows, labels);
      } else {
        rows = ctx.task->query_index;
        labels = ctx.task->query_slots;
      }
      b.loss = ce_loss_on_tape(t, h, gp, pn, rows, labels);
      return;
    }
    case LossKind::kInfluence: {
      int a = adjacency_on_tape(t, ctx, sp, pn);
      int h = encoder_on_tape(t, a, ctx, gp, pn);
      b.loss = influence_loss_on_tape(t, h, *ctx.task);
      return;
    }
    case LossKind::kMutualInfo: {
      int a = adjacency_on_tape(t, ctx, sp, pn);
      b.loss = mi_loss_on_tape(t, a, ctx);
      return;
    }
    case LossKind::kStructure: {
      int a = adjacency_on_tape(t, ctx, sp, pn);
      int h = encoder_on_tape(t, a, ctx, gp, pn);
      int l_influence = influence_loss_on_tape(t, h, *ctx.task);
      int l_mi = mi_loss_on_tape(t, a, ctx);
      b.loss = t.add(l_influence, l_mi);
      return;
    }
    default:
      throw ArgumentError("unknown loss kind");
  }
}

}  // namespace

double loss_value(LossKind kind, const EpisodeLossContext& ctx,
                  const StructureParams& sp, const EncoderParams& gp) {
  BuiltLoss b;
  build_loss(b, kind, ctx, sp, gp);
  return b.tape.scalar(b.loss);
}

LossGradients compute_gradients(LossKind kind, const EpisodeLossContext& ctx,
                                const StructureParams& sp,
                                const EncoderParams& gp) {
  BuiltLoss b;
  build_loss(b, kind, ctx, sp, gp);
  b.tape.backward(b.loss);

  LossGradients out;
  out.value = b.tape.scalar(b.loss);
  out.d_structure = zeros_like(sp);
  out.d_encoder = zeros_like(gp);

  auto fetch = [&](int id, Eigen::MatrixXd& dst, const char* name) {
    if (id < 0) return;
    dst = b.tape.grad(id);
    if (!dst.allFinite())
      throw NumericalError(std::string("non-finite gradient for ") + name);
  };
  fetch(b.pn.w1, out.d_structure.W1, "W1");
  fetch(b.pn.w2, out.d_structure.W2, "W2");
  fetch(b.pn.psi, out.d_structure.psi_table, "psi_table");
  fetch(b.pn.gw1, out.d_encoder.gcn_W1, "gcn_W1");
  fetch(b.pn.gw2, out.d_encoder.gcn_W2, "gcn_W2");
  fetch(b.pn.cw, out.d_encoder.clf_W, "clf_W");
  fetch(b.pn.cb, out.d_encoder.clf_b, "clf_b");
  if (!std::isfinite(out.value))
    throw NumericalError("non-finite loss value");
  return out;
}

}  // namespace glitter
