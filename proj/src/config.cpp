#include "glitter/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "glitter/errors.hpp"

namespace glitter {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    int out = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected integer, got '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    std::uint64_t out = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected unsigned integer, got '" + v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected number, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

}  // namespace

KeyValues parse_config_text(std::istream& in, const std::string& origin) {
  KeyValues kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": expected 'key = value', got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": empty key or value");
    kv.emplace_back(key, value);
  }
  return kv;
}

KeyValues parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string());
  return parse_config_text(in, path.string());
}

void apply_train_config(TrainConfig& cfg, const KeyValues& kv) {
  for (const auto& [key, v] : kv) {
    if (key == "n_way") cfg.n_way = to_int(key, v);
    else if (key == "k_shot") cfg.k_shot = to_int(key, v);
    else if (key == "q_queries") cfg.q_queries = to_int(key, v);
    else if (key == "h") cfg.h = to_int(key, v);
    else if (key == "c_common") cfg.c_common = to_int(key, v);
    else if (key == "m") cfg.m = to_int(key, v);
    else if (key == "eta") cfg.eta = to_int(key, v);
    else if (key == "alpha") cfg.alpha = to_double(key, v);
    else if (key == "beta1") cfg.beta1 = to_double(key, v);
    else if (key == "beta2") cfg.beta2 = to_double(key, v);
    else if (key == "epochs") cfg.epochs = to_int(key, v);
    else if (key == "hidden_dim") cfg.hidden_dim = to_int(key, v);
    else if (key == "d_a") cfg.d_a = to_int(key, v);
    else if (key == "d_max") cfg.d_max = to_int(key, v);
    else if (key == "dropout") cfg.dropout = to_double(key, v);
    else if (key == "weight_decay") cfg.weight_decay = to_double(key, v);
    else if (key == "seed") cfg.seed = to_u64(key, v);
    else if (key == "setting") cfg.setting = setting_from_string(v);
    else if (key == "first_order") cfg.first_order = to_bool(key, v);
    else if (key == "normalize_scores") cfg.normalize_scores = to_bool(key, v);
    else if (key == "classic_maml") cfg.classic_maml = to_bool(key, v);
    else if (key == "ratio_train") cfg.ratio_train = to_double(key, v);
    else if (key == "ratio_val") cfg.ratio_val = to_double(key, v);
    else if (key == "ratio_test") cfg.ratio_test = to_double(key, v);
    else if (key == "val_every") cfg.val_every = to_int(key, v);
    else if (key == "val_episodes") cfg.val_episodes = to_int(key, v);
    else if (key == "workers") cfg.workers = to_int(key, v);
    else if (key == "feature_dim") { /* written by checkpoints; ignored here */ }
    else throw ConfigError("unknown train config key '" + key + "'");
  }
}

void apply_sbm_config(SBMConfig& cfg, const KeyValues& kv) {
  for (const auto& [key, v] : kv) {
    if (key == "num_graphs") cfg.num_graphs = to_int(key, v);
    else if (key == "classes_per_graph") cfg.classes_per_graph = to_int(key, v);
    else if (key == "nodes_per_class") cfg.nodes_per_class = to_int(key, v);
    else if (key == "p_intra") cfg.p_intra = to_double(key, v);
    else if (key == "p_inter") cfg.p_inter = to_double(key, v);
    else if (key == "feature_dim") cfg.feature_dim = to_int(key, v);
    else if (key == "center_scale") cfg.center_scale = to_double(key, v);
    else if (key == "noise_sigma") cfg.noise_sigma = to_double(key, v);
    else if (key == "seed") cfg.seed = to_u64(key, v);
    else throw ConfigError("unknown sbm config key '" + key + "'");
  }
}

KeyValues train_config_to_kv(const TrainConfig& cfg) {
  KeyValues kv;
  kv.emplace_back("n_way", std::to_string(cfg.n_way));
  kv.emplace_back("k_shot", std::to_string(cfg.k_shot));
  kv.emplace_back("q_queries", std::to_string(cfg.q_queries));
  kv.emplace_back("h", std::to_string(cfg.h));
  kv.emplace_back("c_common", std::to_string(cfg.c_common));
  kv.emplace_back("m", std::to_string(cfg.m));
  kv.emplace_back("eta", std::to_string(cfg.eta));
  kv.emplace_back("alpha", fmt_double(cfg.alpha));
  kv.emplace_back("beta1", fmt_double(cfg.beta1));
  kv.emplace_back("beta2", fmt_double(cfg.beta2));
  kv.emplace_back("epochs", std::to_string(cfg.epochs));
  kv.emplace_back("hidden_dim", std::to_string(cfg.hidden_dim));
  kv.emplace_back("d_a", std::to_string(cfg.d_a));
  kv.emplace_back("d_max", std::to_string(cfg.d_max));
  kv.emplace_back("dropout", fmt_double(cfg.dropout));
  kv.emplace_back("weight_decay", fmt_double(cfg.weight_decay));
  kv.emplace_back("seed", std::to_string(cfg.seed));
  kv.emplace_back("setting", to_string(cfg.setting));
  kv.emplace_back("first_order", cfg.first_order ? "true" : "false");
  kv.emplace_back("normalize_scores", cfg.normalize_scores ? "true" : "false");
  kv.emplace_back("classic_maml", cfg.classic_maml ? "true" : "false");
  kv.emplace_back("ratio_train", fmt_double(cfg.ratio_train));
  kv.emplace_back("ratio_val", fmt_double(cfg.ratio_val));
  kv.emplace_back("ratio_test", fmt_double(cfg.ratio_test));
  kv.emplace_back("val_every", std::to_string(cfg.val_every));
  kv.emplace_back("val_episodes", std::to_string(cfg.val_episodes));
  kv.emplace_back("workers", std::to_string(cfg.workers));
  return kv;
}

KeyValues sbm_config_to_kv(const SBMConfig& cfg) {
  KeyValues kv;
  kv.emplace_back("num_graphs", std::to_string(cfg.num_graphs));
  kv.emplace_back("classes_per_graph", std::to_string(cfg.classes_per_graph));
  kv.emplace_back("nodes_per_class", std::to_string(cfg.nodes_per_class));
  kv.emplace_back("p_intra", fmt_double(cfg.p_intra));
  kv.emplace_back("p_inter", fmt_double(cfg.p_inter));
  kv.emplace_back("feature_dim", std::to_string(cfg.feature_dim));
  kv.emplace_back("center_scale", fmt_double(cfg.center_scale));
  kv.emplace_back("noise_sigma", fmt_double(cfg.noise_sigma));
  kv.emplace_back("seed", std::to_string(cfg.seed));
  return kv;
}

std::string format_kv(const KeyValues& kv) {
  std::ostringstream os;
  for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
  return os.str();
}

}  // namespace glitter
