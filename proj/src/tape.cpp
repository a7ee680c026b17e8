#include "glitter/tape.hpp"

#include <cmath>

#include "glitter/errors.hpp"

namespace glitter::ad {

int Tape::push(Mat v, bool track, std::function<void(Tape&, const Mat&)> pull) {
  nodes_.push_back(Node{std::move(v), Mat(), track, std::move(pull)});
  return static_cast<int>(nodes_.size()) - 1;
}

void Tape::accum(int id, const Mat& g) {
  Node& n = nodes_[id];
  if (!n.track) return;
  if (n.grad.size() == 0)
    n.grad = g;
  else
    n.grad += g;
}

Mat Tape::grad(int id) const {
  const Node& n = nodes_[id];
  if (n.grad.size() == 0) return Mat::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

int Tape::leaf(Mat value) { return push(std::move(value), true, nullptr); }

int Tape::constant(Mat value) { return push(std::move(value), false, nullptr); }

int Tape::matmul(int a, int b) {
  Mat v = nodes_[a].value * nodes_[b].value;
  bool track = tracked(a) || tracked(b);
  return push(std::move(v), track, [a, b](Tape& t, const Mat& g) {
    if (t.tracked(a)) t.accum(a, g * t.nodes_[b].value.transpose());
    if (t.tracked(b)) t.accum(b, t.nodes_[a].value.transpose() * g);
  });
}

int Tape::transpose(int a) {
  return push(nodes_[a].value.transpose(), tracked(a),
              [a](Tape& t, const Mat& g) { t.accum(a, g.transpose()); });
}

int Tape::add(int a, int b) {
  Mat v = nodes_[a].value + nodes_[b].value;
  return push(std::move(v), tracked(a) || tracked(b),
              [a, b](Tape& t, const Mat& g) {
                t.accum(a, g);
                t.accum(b, g);
              });
}

int Tape::sub(int a, int b) {
  Mat v = nodes_[a].value - nodes_[b].value;
  return push(std::move(v), tracked(a) || tracked(b),
              [a, b](Tape& t, const Mat& g) {
                t.accum(a, g);
                t.accum(b, -g);
              });
}

int Tape::scale(int a, double c) {
  return push(nodes_[a].value * c, tracked(a),
              [a, c](Tape& t, const Mat& g) { t.accum(a, c * g); });
}

int Tape::hadamard(int a, int b) {
  Mat v = nodes_[a].value.cwiseProduct(nodes_[b].value);
  return push(std::move(v), tracked(a) || tracked(b),
              [a, b](Tape& t, const Mat& g) {
                if (t.tracked(a)) t.accum(a, g.cwiseProduct(t.nodes_[b].value));
                if (t.tracked(b)) t.accum(b, g.cwiseProduct(t.nodes_[a].value));
              });
}

int Tape::relu(int a) {
  Mat v = nodes_[a].value.cwiseMax(0.0);
  return push(std::move(v), tracked(a), [a](Tape& t, const Mat& g) {
    Mat mask = (t.nodes_[a].value.array() > 0.0).cast<double>();
    t.accum(a, g.cwiseProduct(mask));
  });
}

int Tape::sigmoid(int a) {
  Mat v = nodes_[a].value.unaryExpr(
      [](double x) { return 1.0 / (1.0 + std::exp(-x)); });
  int id = push(std::move(v), tracked(a), nullptr);
  nodes_[id].pull = [a, id](Tape& t, const Mat& g) {
    const Mat& y = t.nodes_[id].value;
    t.accum(a, g.cwiseProduct(y.cwiseProduct(Mat::Ones(y.rows(), y.cols()) - y)));
  };
  return id;
}

int Tape::loge(int a) {
  Mat v = nodes_[a].value.array().log().matrix();
  return push(std::move(v), tracked(a), [a](Tape& t, const Mat& g) {
    t.accum(a, g.cwiseQuotient(t.nodes_[a].value));
  });
}

int Tape::clip_min(int a, double floor) {
  Mat v = nodes_[a].value.cwiseMax(floor);
  return push(std::move(v), tracked(a), [a, floor](Tape& t, const Mat& g) {
    Mat mask = (t.nodes_[a].value.array() > floor).cast<double>();
    t.accum(a, g.cwiseProduct(mask));
  });
}

int Tape::reciprocal(int a) {
  Mat v = nodes_[a].value.cwiseInverse();
  int id = push(std::move(v), tracked(a), nullptr);
  nodes_[id].pull = [a, id](Tape& t, const Mat& g) {
    const Mat& y = t.nodes_[id].value;
    t.accum(a, -g.cwiseProduct(y.cwiseProduct(y)));
  };
  return id;
}

int Tape::row_normalize(int a) {
  const Mat& x = nodes_[a].value;
  Eigen::VectorXd s = x.rowwise().sum();
  Mat y = x.array().colwise() / s.array();
  int id = push(std::move(y), tracked(a), nullptr);
  nodes_[id].pull = [a, id, s](Tape& t, const Mat& g) {
    const Mat& y = t.nodes_[id].value;
    Mat gx(g.rows(), g.cols());
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      double dot = g.row(i).dot(y.row(i));
      gx.row(i) = ((g.row(i).array() - dot) / s(i)).matrix();
    }
    t.accum(a, gx);
  };
  return id;
}

int Tape::l2_normalize_rows(int a, double eps) {
  const Mat& x = nodes_[a].value;
  Eigen::VectorXd n = x.rowwise().norm();
  Eigen::VectorXd m = n.cwiseMax(eps);
  Mat y = x.array().colwise() / m.array();
  int id = push(std::move(y), tracked(a), nullptr);
  nodes_[id].pull = [a, id, n, m, eps](Tape& t, const Mat& g) {
    const Mat& y = t.nodes_[id].value;
    Mat gx(g.rows(), g.cols());
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      if (n(i) > eps) {
        double dot = g.row(i).dot(y.row(i));
        gx.row(i) = (g.row(i) - dot * y.row(i)) / m(i);
      } else {
        gx.row(i) = g.row(i) / eps;
      }
    }
    t.accum(a, gx);
  };
  return id;
}

int Tape::exp_neg_pairwise_dist(int u, int v, double grad_guard) {
  const Mat& U = nodes_[u].value;
  const Mat& V = nodes_[v].value;
  Mat dist(U.rows(), V.rows());
  for (Eigen::Index i = 0; i < U.rows(); ++i)
    for (Eigen::Index j = 0; j < V.rows(); ++j)
      dist(i, j) = (U.row(i) - V.row(j)).norm();
  Mat y = (-dist.array()).exp();
  int id = push(std::move(y), tracked(u) || tracked(v), nullptr);
  nodes_[id].pull = [u, v, id, dist, grad_guard](Tape& t, const Mat& g) {
    const Mat& U = t.nodes_[u].value;
    const Mat& V = t.nodes_[v].value;
    const Mat& y = t.nodes_[id].value;
    Mat gu = Mat::Zero(U.rows(), U.cols());
    Mat gv = Mat::Zero(V.rows(), V.cols());
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
      for (Eigen::Index j = 0; j < V.rows(); ++j) {
        double c = -g(i, j) * y(i, j) / std::max(dist(i, j), grad_guard);
        Eigen::RowVectorXd diff = U.row(i) - V.row(j);
        gu.row(i) += c * diff;
        gv.row(j) -= c * diff;
      }
    }
    if (t.tracked(u)) t.accum(u, gu);
    if (t.tracked(v)) t.accum(v, gv);
  };
  return id;
}

int Tape::gather_table(int table, Eigen::MatrixXi idx) {
  const Mat& tab = nodes_[table].value;
  Mat v(idx.rows(), idx.cols());
  for (Eigen::Index i = 0; i < idx.rows(); ++i)
    for (Eigen::Index j = 0; j < idx.cols(); ++j) v(i, j) = tab(idx(i, j), 0);
  return push(std::move(v), tracked(table),
              [table, idx](Tape& t, const Mat& g) {
                Mat gt = Mat::Zero(t.nodes_[table].value.rows(), 1);
                for (Eigen::Index i = 0; i < idx.rows(); ++i)
                  for (Eigen::Index j = 0; j < idx.cols(); ++j)
                    gt(idx(i, j), 0) += g(i, j);
                t.accum(table, gt);
              });
}

int Tape::slice_rows(int a, std::vector<int> rows) {
  const Mat& x = nodes_[a].value;
  Mat v(rows.size(), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) v.row(r) = x.row(rows[r]);
  return push(std::move(v), tracked(a), [a, rows](Tape& t, const Mat& g) {
    Mat gx = Mat::Zero(t.nodes_[a].value.rows(), t.nodes_[a].value.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) gx.row(rows[r]) += g.row(r);
    t.accum(a, gx);
  });
}

int Tape::slice_cols(int a, std::vector<int> cols) {
  const Mat& x = nodes_[a].value;
  Mat v(x.rows(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) v.col(c) = x.col(cols[c]);
  return push(std::move(v), tracked(a), [a, cols](Tape& t, const Mat& g) {
    Mat gx = Mat::Zero(t.nodes_[a].value.rows(), t.nodes_[a].value.cols());
    for (std::size_t c = 0; c < cols.size(); ++c) gx.col(cols[c]) += g.col(c);
    t.accum(a, gx);
  });
}

int Tape::sum_all(int a) {
  Mat v(1, 1);
  v(0, 0) = nodes_[a].value.sum();
  return push(std::move(v), tracked(a), [a](Tape& t, const Mat& g) {
    const Mat& x = t.nodes_[a].value;
    t.accum(a, Mat::Constant(x.rows(), x.cols(), g(0, 0)));
  });
}

int Tape::scale_rows(int a, int colvec) {
  const Mat& x = nodes_[a].value;
  const Mat& c = nodes_[colvec].value;
  Mat v = x.array().colwise() * c.col(0).array();
  return push(std::move(v), tracked(a) || tracked(colvec),
              [a, colvec](Tape& t, const Mat& g) {
                const Mat& x = t.nodes_[a].value;
                const Mat& c = t.nodes_[colvec].value;
                if (t.tracked(a))
                  t.accum(a, (g.array().colwise() * c.col(0).array()).matrix());
                if (t.tracked(colvec)) {
                  Mat gc = g.cwiseProduct(x).rowwise().sum();
                  t.accum(colvec, gc);
                }
              });
}

int Tape::diag_as_col(int a) {
  const Mat& x = nodes_[a].value;
  Mat v = x.diagonal();
  return push(std::move(v), tracked(a), [a](Tape& t, const Mat& g) {
    const Mat& x = t.nodes_[a].value;
    Mat gx = Mat::Zero(x.rows(), x.cols());
    gx.diagonal() = g.col(0);
    t.accum(a, gx);
  });
}

int Tape::add_rowvec(int a, int rowvec) {
  const Mat& x = nodes_[a].value;
  const Mat& r = nodes_[rowvec].value;
  Mat v = x.array().rowwise() + r.row(0).array();
  return push(std::move(v), tracked(a) || tracked(rowvec),
              [a, rowvec](Tape& t, const Mat& g) {
                t.accum(a, g);
                if (t.tracked(rowvec)) {
                  Mat gr = g.colwise().sum();
                  t.accum(rowvec, gr);
                }
              });
}

int Tape::add_colvec(int a, int colvec) {
  const Mat& x = nodes_[a].value;
  const Mat& c = nodes_[colvec].value;
  Mat v = x.array().colwise() + c.col(0).array();
  return push(std::move(v), tracked(a) || tracked(colvec),
              [a, colvec](Tape& t, const Mat& g) {
                t.accum(a, g);
                if (t.tracked(colvec)) {
                  Mat gc = g.rowwise().sum();
                  t.accum(colvec, gc);
                }
              });
}

int Tape::softmax_rows(int a) {
  const Mat& x = nodes_[a].value;
  Mat y(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::RowVectorXd e = (x.row(i).array() - x.row(i).maxCoeff()).exp();
    y.row(i) = e / e.sum();
  }
  int id = push(std::move(y), tracked(a), nullptr);
  nodes_[id].pull = [a, id](Tape& t, const Mat& g) {
    const Mat& y = t.nodes_[id].value;
    Mat gx(g.rows(), g.cols());
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      double dot = g.row(i).dot(y.row(i));
      gx.row(i) = y.row(i).cwiseProduct((g.row(i).array() - dot).matrix());
    }
    t.accum(a, gx);
  };
  return id;
}

int Tape::pick(int a, std::vector<std::pair<int, int>> cells) {
  const Mat& x = nodes_[a].value;
  Mat v(cells.size(), 1);
  for (std::size_t k = 0; k < cells.size(); ++k)
    v(k, 0) = x(cells[k].first, cells[k].second);
  return push(std::move(v), tracked(a), [a, cells](Tape& t, const Mat& g) {
    const Mat& x = t.nodes_[a].value;
    Mat gx = Mat::Zero(x.rows(), x.cols());
    for (std::size_t k = 0; k < cells.size(); ++k)
      gx(cells[k].first, cells[k].second) += g(k, 0);
    t.accum(a, gx);
  });
}

void Tape::backward(int root) {
  if (nodes_[root].value.rows() != 1 || nodes_[root].value.cols() != 1)
    throw ArgumentError("backward: root must be a 1x1 scalar");
  nodes_[root].grad = Mat::Ones(1, 1);
  for (int i = root; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.track || n.grad.size() == 0 || !n.pull) continue;
    n.pull(*this, n.grad);
  }
}

}  // namespace glitter::ad
