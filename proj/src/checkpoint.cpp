#include "glitter/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "glitter/errors.hpp"

namespace glitter {

namespace {

constexpr const char* kMagic = "glitter-checkpoint v1";

void write_tensor(std::ofstream& out, const std::string& name,
                  const Eigen::MatrixXd& m) {
  out << "tensor " << name << " " << m.rows() << " " << m.cols() << "\n";
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      if (j) out << " ";
      out << buf;
    }
    out << "\n";
  }
}

int expected_int(const Checkpoint& c, const std::string& key) {
  std::string v = checkpoint_config_value(c, key);
  if (v.empty())
    throw SchemaError("checkpoint config snapshot missing key '" + key + "'");
  return std::stoi(v);
}

void check_shape(const std::string& name, const Eigen::MatrixXd& m, int rows,
                 int cols) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream msg;
    msg << "checkpoint tensor " << name << " has shape " << m.rows() << "x"
        << m.cols() << " but config snapshot implies " << rows << "x" << cols;
    throw SchemaError(msg.str());
  }
}

}  // namespace

std::string checkpoint_config_value(const Checkpoint& ckpt,
                                    const std::string& key) {
  for (const auto& [k, v] : ckpt.config)
    if (k == key) return v;
  return "";
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write checkpoint " + path.string());
  out << kMagic << "\n";
  out << "rng " << ckpt.rng_state << "\n";
  for (const auto& [k, v] : ckpt.config) out << "config " << k << " " << v << "\n";
  ParameterSet params = ckpt.params;
  for (auto& [name, t] : named_tensors(params)) write_tensor(out, name, *t);
  out << "end\n";
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open checkpoint " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw ParseError(path.string() + ": bad checkpoint header");

  Checkpoint ckpt;
  std::vector<std::pair<std::string, Eigen::MatrixXd>> tensors;
  bool saw_end = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "rng") {
      std::string rest;
      std::getline(ls, rest);
      if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
      ckpt.rng_state = rest;
    } else if (tag == "config") {
      std::string k, v;
      ls >> k;
      std::getline(ls, v);
      if (!v.empty() && v.front() == ' ') v.erase(0, 1);
      ckpt.config.emplace_back(k, v);
    } else if (tag == "tensor") {
      std::string name;
      Eigen::Index rows, cols;
      if (!(ls >> name >> rows >> cols))
        throw ParseError(path.string() + ": malformed tensor header '" + line + "'");
      Eigen::MatrixXd m(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (!std::getline(in, line))
          throw ParseError(path.string() + ": truncated tensor " + name);
        std::istringstream row(line);
        for (Eigen::Index j = 0; j < cols; ++j)
          if (!(row >> m(i, j)))
            throw ParseError(path.string() + ": truncated row in tensor " + name);
      }
      if (!m.allFinite())
        throw SchemaError(path.string() + ": non-finite values in tensor " + name);
      tensors.emplace_back(name, std::move(m));
    } else if (tag == "end") {
      saw_end = true;
      break;
    } else {
      throw ParseError(path.string() + ": unknown record '" + tag + "'");
    }
  }
  if (!saw_end) throw ParseError(path.string() + ": truncated checkpoint");

  auto take = [&](const std::string& name) -> Eigen::MatrixXd {
    for (auto& [n, m] : tensors)
      if (n == name) return m;
    throw SchemaError(path.string() + ": missing tensor " + name);
  };
  ckpt.params.s.W1 = take("W1");
  ckpt.params.s.W2 = take("W2");
  ckpt.params.s.psi_table = take("psi_table");
  ckpt.params.g.gcn_W1 = take("gcn_W1");
  ckpt.params.g.gcn_W2 = take("gcn_W2");
  ckpt.params.g.clf_W = take("clf_W");
  ckpt.params.g.clf_b = take("clf_b");

  const int d = expected_int(ckpt, "feature_dim");
  const int d_a = expected_int(ckpt, "d_a");
  const int d_max = expected_int(ckpt, "d_max");
  const int hidden = expected_int(ckpt, "hidden_dim");
  const int slots = expected_int(ckpt, "n_way");
  ckpt.params.s.d_max = d_max;
  check_shape("W1", ckpt.params.s.W1, d_a, d);
  check_shape("W2", ckpt.params.s.W2, d_a, d);
  check_shape("psi_table", ckpt.params.s.psi_table, d_max + 2, 1);
  check_shape("gcn_W1", ckpt.params.g.gcn_W1, d, hidden);
  check_shape("gcn_W2", ckpt.params.g.gcn_W2, hidden, hidden);
  check_shape("clf_W", ckpt.params.g.clf_W, hidden, slots);
  check_shape("clf_b", ckpt.params.g.clf_b, 1, slots);
  return ckpt;
}

}  // namespace glitter
