#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "glitter/dataset.hpp"
#include "glitter/trainer.hpp"

namespace glitter {

// Flat `key = value` document with '#' comments. Order-preserving so resolved
// configurations print deterministically.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_config_text(std::istream& in, const std::string& origin);
KeyValues parse_config_file(const std::filesystem::path& path);

// Applies entries onto a config struct; unknown keys are rejected.
void apply_train_config(TrainConfig& cfg, const KeyValues& kv);
void apply_sbm_config(SBMConfig& cfg, const KeyValues& kv);

KeyValues train_config_to_kv(const TrainConfig& cfg);
KeyValues sbm_config_to_kv(const SBMConfig& cfg);

std::string format_kv(const KeyValues& kv);

}  // namespace glitter
