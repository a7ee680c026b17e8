#include "glitter/dataset.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "glitter/errors.hpp"
#include "glitter/rng.hpp"

namespace glitter {

namespace {

void validate(const SBMConfig& cfg) {
  if (cfg.num_graphs <= 0 || cfg.classes_per_graph <= 0 ||
      cfg.nodes_per_class <= 0)
    throw ArgumentError("sbm: counts must be positive");
  if (!(cfg.p_inter >= 0.0 && cfg.p_inter < cfg.p_intra && cfg.p_intra <= 1.0))
    throw ArgumentError("sbm: require 0 <= p_inter < p_intra <= 1");
  if (!(cfg.noise_sigma > 0.0)) throw ArgumentError("sbm: noise_sigma must be > 0");
  if (cfg.feature_dim <= 0) throw ArgumentError("sbm: feature_dim must be positive");
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Dataset generate_sbm_dataset(const SBMConfig& cfg) {
  validate(cfg);

  // Class centers are drawn once and shared by every graph, so label sets can
  // be shared or split across graphs as the evaluation regime requires.
  auto center_rng = substream(cfg.seed, streams::kSbm, 0);
  std::normal_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd centers(cfg.classes_per_graph, cfg.feature_dim);
  for (int c = 0; c < cfg.classes_per_graph; ++c)
    for (int f = 0; f < cfg.feature_dim; ++f)
      centers(c, f) = cfg.center_scale * unit(center_rng);

  Dataset ds;
  ds.name = "sbm";
  ds.feature_dim = cfg.feature_dim;
  for (int c = 0; c < cfg.classes_per_graph; ++c) ds.class_universe.push_back(c);

  const int n = cfg.classes_per_graph * cfg.nodes_per_class;
  for (int gi = 0; gi < cfg.num_graphs; ++gi) {
    auto rng = substream(cfg.seed, streams::kSbm, 1 + gi);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    std::vector<std::int32_t> labels(n);
    for (int v = 0; v < n; ++v) labels[v] = v / cfg.nodes_per_class;

    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        double p = labels[u] == labels[v] ? cfg.p_intra : cfg.p_inter;
        if (coin(rng) < p) edges.emplace_back(u, v);
      }
    }

    Eigen::MatrixXd feat(n, cfg.feature_dim);
    for (int v = 0; v < n; ++v)
      for (int f = 0; f < cfg.feature_dim; ++f)
        feat(v, f) = centers(labels[v], f) + cfg.noise_sigma * unit(rng);

    ds.graphs.push_back(make_graph(gi, n, std::move(edges), std::move(feat),
                                   std::move(labels)));
  }
  return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream meta(dir / "meta");
    if (!meta) throw ParseError("cannot write " + (dir / "meta").string());
    meta << "name " << ds.name << "\n";
    meta << "feature_dim " << ds.feature_dim << "\n";
    meta << "graph_count " << ds.graphs.size() << "\n";
    meta << "classes";
    for (auto c : ds.class_universe) meta << " " << c;
    meta << "\n";
  }
  for (std::size_t k = 0; k < ds.graphs.size(); ++k) {
    const Graph& g = ds.graphs[k];
    std::ofstream out(dir / ("graph_" + std::to_string(k) + ".txt"));
    out << "graph_id " << g.graph_id << "\n";
    out << "nodes " << g.node_count << "\n";
    out << "edges " << g.edges.size() << "\n";
    for (const auto& [u, v] : g.edges) out << u << " " << v << "\n";
    out << "features\n";
    for (int i = 0; i < g.node_count; ++i) {
      for (int j = 0; j < ds.feature_dim; ++j) {
        if (j) out << " ";
        out << fmt_double(g.features(i, j));
      }
      out << "\n";
    }
    out << "labels\n";
    for (int i = 0; i < g.node_count; ++i) {
      if (g.labels[i] == kNoLabel)
        out << "null\n";
      else
        out << g.labels[i] << "\n";
    }
  }
}

namespace {

// Line-oriented reader that reports the file and record on failure.
struct RecordReader {
  std::ifstream in;
  std::string file;
  int line_no = 0;

  explicit RecordReader(const std::filesystem::path& p)
      : in(p), file(p.string()) {
    if (!in) throw ParseError("cannot open " + file);
  }

  std::string next_line() {
    std::string line;
    if (!std::getline(in, line))
      throw ParseError(file + ": unexpected end of file at line " +
                       std::to_string(line_no + 1));
    ++line_no;
    return line;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(file + ":" + std::to_string(line_no) + ": " + what);
  }

  std::string expect_key(const std::string& key) {
    std::string line = next_line();
    if (line.rfind(key + " ", 0) != 0 && line != key)
      fail("expected record '" + key + "', got '" + line + "'");
    return line.size() > key.size() ? line.substr(key.size() + 1) : "";
  }
};

}  // namespace

Dataset load_dataset(const std::filesystem::path& dir) {
  Dataset ds;
  std::size_t graph_count = 0;
  {
    RecordReader meta(dir / "meta");
    ds.name = meta.expect_key("name");
    ds.feature_dim = std::stoi(meta.expect_key("feature_dim"));
    graph_count = std::stoul(meta.expect_key("graph_count"));
    std::istringstream cls(meta.expect_key("classes"));
    std::int32_t c;
    while (cls >> c) ds.class_universe.push_back(c);
  }
  if (graph_count == 0)
    throw SchemaError(dir.string() + ": dataset contains no graphs");
  if (ds.feature_dim <= 0)
    throw SchemaError(dir.string() + ": nonpositive feature_dim");

  for (std::size_t k = 0; k < graph_count; ++k) {
    RecordReader r(dir / ("graph_" + std::to_string(k) + ".txt"));
    std::int32_t gid = std::stoi(r.expect_key("graph_id"));
    std::int32_t n = std::stoi(r.expect_key("nodes"));
    std::size_t edge_count = std::stoul(r.expect_key("edges"));

    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(edge_count);
    for (std::size_t e = 0; e < edge_count; ++e) {
      std::istringstream ln(r.next_line());
      NodeId u, v;
      if (!(ln >> u >> v)) r.fail("malformed edge record");
      edges.emplace_back(u, v);
    }

    r.expect_key("features");
    Eigen::MatrixXd feat(n, ds.feature_dim);
    for (std::int32_t i = 0; i < n; ++i) {
      std::istringstream ln(r.next_line());
      for (int j = 0; j < ds.feature_dim; ++j) {
        if (!(ln >> feat(i, j)))
          r.fail("feature row " + std::to_string(i) + " has fewer than " +
                 std::to_string(ds.feature_dim) + " values");
      }
      double extra;
      if (ln >> extra)
        throw SchemaError(r.file + ": feature row " + std::to_string(i) +
                          " has more than " + std::to_string(ds.feature_dim) +
                          " values");
    }

    r.expect_key("labels");
    std::vector<std::int32_t> labels(n);
    for (std::int32_t i = 0; i < n; ++i) {
      std::string line = r.next_line();
      if (line == "null") {
        labels[i] = kNoLabel;
      } else {
        try {
          labels[i] = std::stoi(line);
        } catch (const std::exception&) {
          r.fail("malformed label record '" + line + "'");
        }
        if (std::find(ds.class_universe.begin(), ds.class_universe.end(),
                      labels[i]) == ds.class_universe.end())
          throw SchemaError(r.file + ": label " + std::to_string(labels[i]) +
                            " not in class universe");
      }
    }

    try {
      ds.graphs.push_back(
          make_graph(gid, n, std::move(edges), std::move(feat), std::move(labels)));
    } catch (const ArgumentError& e) {
      throw SchemaError(r.file + ": " + e.what());
    }
  }
  return ds;
}

bool dataset_equal(const Dataset& a, const Dataset& b) {
  if (a.name != b.name || a.feature_dim != b.feature_dim ||
      a.class_universe != b.class_universe || a.graphs.size() != b.graphs.size())
    return false;
  for (std::size_t k = 0; k < a.graphs.size(); ++k) {
    const Graph& x = a.graphs[k];
    const Graph& y = b.graphs[k];
    if (x.graph_id != y.graph_id || x.node_count != y.node_count ||
        x.edges != y.edges || x.labels != y.labels)
      return false;
    if (x.features.rows() != y.features.rows() ||
        x.features.cols() != y.features.cols() || x.features != y.features)
      return false;
  }
  return true;
}

}  // namespace glitter
