#include "glitter/episode.hpp"

#include <algorithm>

#include "glitter/errors.hpp"
#include "glitter/rng.hpp"

namespace glitter {

std::string to_string(Setting s) {
  switch (s) {
    case Setting::kSharedGraphDisjointLabel: return "shared-graph-disjoint-label";
    case Setting::kDisjointGraphSharedLabel: return "disjoint-graph-shared-label";
    case Setting::kDisjointGraphDisjointLabel: return "disjoint-graph-disjoint-label";
    case Setting::kSingleGraphDisjointLabel: return "single-graph-disjoint-label";
  }
  return "?";
}

Setting setting_from_string(const std::string& s) {
  if (s == "shared-graph-disjoint-label") return Setting::kSharedGraphDisjointLabel;
  if (s == "disjoint-graph-shared-label") return Setting::kDisjointGraphSharedLabel;
  if (s == "disjoint-graph-disjoint-label") return Setting::kDisjointGraphDisjointLabel;
  if (s == "single-graph-disjoint-label") return Setting::kSingleGraphDisjointLabel;
  throw ConfigError("unknown setting '" + s + "'");
}

const std::vector<std::int32_t>& SplitSpec::classes(Phase p) const {
  switch (p) {
    case Phase::kTrain: return train_classes;
    case Phase::kVal: return val_classes;
    default: return test_classes;
  }
}

const std::vector<std::int32_t>& SplitSpec::graphs(Phase p) const {
  switch (p) {
    case Phase::kTrain: return train_graphs;
    case Phase::kVal: return val_graphs;
    default: return test_graphs;
  }
}

std::vector<NodeId> Episode::support_flat() const {
  std::vector<NodeId> flat;
  for (const auto& slot : support)
    flat.insert(flat.end(), slot.begin(), slot.end());
  return flat;
}

namespace {

// Shuffle then cut at floor(ratio * n) boundaries; remainder goes to test.
void partition(std::vector<std::int32_t> items, Ratios r, std::mt19937_64& rng,
               const std::string& what, std::vector<std::int32_t>& train,
               std::vector<std::int32_t>& val, std::vector<std::int32_t>& test) {
  std::shuffle(items.begin(), items.end(), rng);
  const auto n = items.size();
  const auto n_train = static_cast<std::size_t>(r.train * static_cast<double>(n));
  const auto n_val = static_cast<std::size_t>(r.val * static_cast<double>(n));
  if (n_train == 0 || n_val == 0 || n_train + n_val >= n)
    throw ConfigError("split leaves an empty " + what + " phase (have " +
                      std::to_string(n) + ")");
  train.assign(items.begin(), items.begin() + n_train);
  val.assign(items.begin() + n_train, items.begin() + n_train + n_val);
  test.assign(items.begin() + n_train + n_val, items.end());
  std::sort(train.begin(), train.end());
  std::sort(val.begin(), val.end());
  std::sort(test.begin(), test.end());
}

}  // namespace

SplitSpec make_split(const Dataset& ds, Setting setting, Ratios ratios,
                     std::uint64_t seed) {
  if (ratios.train <= 0 || ratios.val <= 0 || ratios.test <= 0)
    throw ConfigError("split ratios must be positive");

  SplitSpec split;
  split.setting = setting;
  auto rng = substream(seed, streams::kSplit);

  std::vector<std::int32_t> all_graphs;
  for (const Graph& g : ds.graphs) all_graphs.push_back(g.graph_id);

  const bool disjoint_labels = setting != Setting::kDisjointGraphSharedLabel;
  const bool disjoint_graphs = setting == Setting::kDisjointGraphSharedLabel ||
                               setting == Setting::kDisjointGraphDisjointLabel;

  if (setting == Setting::kSingleGraphDisjointLabel && ds.graphs.size() != 1)
    throw ConfigError("single-graph setting requires a dataset with exactly one "
                      "graph, have " + std::to_string(ds.graphs.size()));

  if (disjoint_labels) {
    partition(ds.class_universe, ratios, rng, "class", split.train_classes,
              split.val_classes, split.test_classes);
  } else {
    split.train_classes = split.val_classes = split.test_classes =
        ds.class_universe;
  }

  if (disjoint_graphs) {
    partition(all_graphs, ratios, rng, "graph", split.train_graphs,
              split.val_graphs, split.test_graphs);
  } else {
    split.train_graphs = split.val_graphs = split.test_graphs = all_graphs;
  }
  return split;
}

Episode sample_episode(const Dataset& ds, const SplitSpec& split, Phase phase,
                       int n_way, int k_shot, int q_queries,
                       std::mt19937_64& rng) {
  if (n_way < 1 || k_shot < 1 || q_queries < 1)
    throw ArgumentError("episode shape must be positive");

  const auto& phase_graphs = split.graphs(phase);
  if (phase_graphs.empty()) throw SamplingError("no graphs in phase");
  std::uniform_int_distribution<std::size_t> pick_graph(0, phase_graphs.size() - 1);
  const std::int32_t graph_id = phase_graphs[pick_graph(rng)];

  const Graph* graph = nullptr;
  for (const Graph& g : ds.graphs)
    if (g.graph_id == graph_id) graph = &g;
  if (graph == nullptr)
    throw SamplingError("graph " + std::to_string(graph_id) + " not in dataset");

  // Every chosen class must cover its support plus the largest per-slot query
  // allotment.
  const int need = k_shot + (q_queries + n_way - 1) / n_way;
  std::vector<std::int32_t> eligible;
  for (std::int32_t c : split.classes(phase)) {
    int count = 0;
    for (NodeId v = 0; v < graph->node_count; ++v)
      if (graph->labels[v] == c) ++count;
    if (count >= need) eligible.push_back(c);
  }
  if (static_cast<int>(eligible.size()) < n_way)
    throw SamplingError(
        "graph " + std::to_string(graph_id) + " has only " +
        std::to_string(eligible.size()) + " classes with >= " +
        std::to_string(need) + " labeled nodes; need " + std::to_string(n_way));

  std::shuffle(eligible.begin(), eligible.end(), rng);
  eligible.resize(n_way);
  std::sort(eligible.begin(), eligible.end());

  Episode ep;
  ep.graph_id = graph_id;
  ep.phase = phase;
  ep.class_slots = eligible;

  for (int slot = 0; slot < n_way; ++slot) {
    std::vector<NodeId> pool;
    for (NodeId v = 0; v < graph->node_count; ++v)
      if (graph->labels[v] == ep.class_slots[slot]) pool.push_back(v);
    std::shuffle(pool.begin(), pool.end(), rng);

    ep.support.emplace_back(pool.begin(), pool.begin() + k_shot);
    int q_slot = q_queries / n_way + (slot < q_queries % n_way ? 1 : 0);
    for (int q = 0; q < q_slot; ++q) {
      ep.query.push_back(pool[k_shot + q]);
      ep.query_slots.push_back(slot);
    }
  }
  return ep;
}

}  // namespace glitter
