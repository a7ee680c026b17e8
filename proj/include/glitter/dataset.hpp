#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "glitter/graph.hpp"

namespace glitter {

// A collection of graphs sharing one feature dimension and one global class
// universe. Immutable once loaded or generated.
struct Dataset {
  std::string name;
  int feature_dim = 0;
  std::vector<std::int32_t> class_universe;  // sorted
  std::vector<Graph> graphs;
};

// Configuration for the synthetic stochastic-block-model generator. Each graph
// gets `classes_per_graph` blocks of `nodes_per_class` nodes; features are a
// per-class center (shared across graphs) plus Gaussian noise, so the
// center_scale / noise_sigma ratio is the one difficulty knob.
struct SBMConfig {
  int num_graphs = 1;
  int classes_per_graph = 10;
  int nodes_per_class = 30;
  double p_intra = 0.2;
  double p_inter = 0.02;
  int feature_dim = 16;
  double center_scale = 1.0;
  double noise_sigma = 0.3;
  std::uint64_t seed = 0;
};

Dataset generate_sbm_dataset(const SBMConfig& cfg);

// On-disk layout: a directory with a `meta` file (name, feature_dim, class
// universe, graph count) and one `graph_<k>.txt` record per graph. Numeric
// text is locale-independent decimal at full double precision.
void save_dataset(const Dataset& ds, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

bool dataset_equal(const Dataset& a, const Dataset& b);

}  // namespace glitter
