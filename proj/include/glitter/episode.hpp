#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "glitter/dataset.hpp"

namespace glitter {

enum class Phase { kTrain, kVal, kTest };

// The four evaluation regimes: which of the class/graph axes are split across
// phases and which are shared.
enum class Setting {
  kSharedGraphDisjointLabel,
  kDisjointGraphSharedLabel,
  kDisjointGraphDisjointLabel,
  kSingleGraphDisjointLabel,
};

std::string to_string(Setting s);
Setting setting_from_string(const std::string& s);

struct Ratios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct SplitSpec {
  Setting setting = Setting::kSingleGraphDisjointLabel;
  std::vector<std::int32_t> train_classes, val_classes, test_classes;
  std::vector<std::int32_t> train_graphs, val_graphs, test_graphs;

  const std::vector<std::int32_t>& classes(Phase p) const;
  const std::vector<std::int32_t>& graphs(Phase p) const;
};

// Partitions classes and/or graphs according to the setting. Partition sizes
// are floor(ratio * total) for train and val with the remainder going to test;
// deterministic given the seed.
SplitSpec make_split(const Dataset& ds, Setting setting, Ratios ratios,
                     std::uint64_t seed);

// One meta-task: N class slots with K labeled support nodes each and Q query
// nodes, all drawn from a single graph.
struct Episode {
  std::int32_t graph_id = 0;
  Phase phase = Phase::kTrain;
  std::vector<std::int32_t> class_slots;         // N class ids, ascending
  std::vector<std::vector<NodeId>> support;      // N x K, slot-major
  std::vector<NodeId> query;                     // Q
  std::vector<int> query_slots;                  // ground-truth slot per query

  int n_way() const { return static_cast<int>(class_slots.size()); }
  int k_shot() const { return support.empty() ? 0 : static_cast<int>(support[0].size()); }
  std::vector<NodeId> support_flat() const;
};

// Uniformly picks a graph among the phase graphs, then N eligible classes
// (each needing at least K + ceil(Q/N) labeled nodes), then disjoint support
// and query nodes. Query counts are split as evenly as possible across slots,
// remainder to the lowest slots.
Episode sample_episode(const Dataset& ds, const SplitSpec& split, Phase phase,
                       int n_way, int k_shot, int q_queries,
                       std::mt19937_64& rng);

}  // namespace glitter
