#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

namespace glitter::ad {

using Mat = Eigen::MatrixXd;

// Reverse-mode differentiation over dense matrices. Nodes are appended in
// topological order as the forward expression is built; backward() walks the
// list in reverse, pulling each node's adjoint into its parents. A tape lives
// for one scalar evaluation and is then discarded.
//
// Gradients never flow into constant() nodes, so inputs that the surrounding
// code treats as fixed (feature matrices, masks, index maps, a frozen
// adjacency) are constants, while parameters enter as leaf() nodes.
class Tape {
 public:
  int leaf(Mat value);
  int constant(Mat value);

  int matmul(int a, int b);
  int transpose(int a);
  int add(int a, int b);
  int sub(int a, int b);
  int scale(int a, double c);
  int hadamard(int a, int b);
  int relu(int a);
  int sigmoid(int a);
  int loge(int a);
  int clip_min(int a, double floor);
  int reciprocal(int a);

  // Divide each row by its sum (rows must be strictly positive here; the
  // zero-row one-hot convention lives in the forward-only code path).
  int row_normalize(int a);

  // y_i = x_i / max(||x_i||_2, eps)
  int l2_normalize_rows(int a, double eps);

  // out(i,j) = exp(-||u_i - v_j||_2); the distance in the derivative is
  // clamped below by grad_guard to keep the gradient finite at u_i == v_j.
  int exp_neg_pairwise_dist(int u, int v, double grad_guard);

  // out(i,j) = table(idx(i,j), 0) for a column-vector table.
  int gather_table(int table, Eigen::MatrixXi idx);

  int slice_rows(int a, std::vector<int> rows);
  int slice_cols(int a, std::vector<int> cols);
  int sum_all(int a);                 // 1x1
  int scale_rows(int a, int colvec);  // out(i,j) = a(i,j) * v(i,0)
  int diag_as_col(int a);
  int add_rowvec(int a, int rowvec);
  int add_colvec(int a, int colvec);
  int softmax_rows(int a);
  int pick(int a, std::vector<std::pair<int, int>> cells);  // k x 1

  // Seeds d(root)/d(root) = 1 and accumulates adjoints; root must be 1x1.
  void backward(int root);

  const Mat& value(int id) const { return nodes_[id].value; }
  double scalar(int id) const { return nodes_[id].value(0, 0); }
  // Zero matrix when no gradient reached the node.
  Mat grad(int id) const;

 private:
  struct Node {
    Mat value;
    Mat grad;
    bool track = true;
    std::function<void(Tape&, const Mat& g)> pull;
  };

  std::vector<Node> nodes_;

  int push(Mat v, bool track, std::function<void(Tape&, const Mat&)> pull);
  bool tracked(int id) const { return nodes_[id].track; }
  void accum(int id, const Mat& g);
};

}  // namespace glitter::ad
