#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "glitter/params.hpp"

namespace glitter {

// Serialized model state: both parameter groups, the configuration they were
// trained under, and a provenance string for the RNG stream that produced them.
struct Checkpoint {
  ParameterSet params;
  std::vector<std::pair<std::string, std::string>> config;  // key/value snapshot
  std::string rng_state;
};

// Single text document of named arrays with shape headers; values are written
// at 17 significant digits, which round-trips 64-bit floats exactly.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::string checkpoint_config_value(const Checkpoint& ckpt,
                                    const std::string& key);

}  // namespace glitter
