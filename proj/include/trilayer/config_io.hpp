#pragma once

#include <filesystem>
#include <string>

#include "trilayer/model.hpp"

namespace trilayer {

// JSON layout:
//   { "thresholds": {"sigma_D", "sigma_Q", "nu1", "nu2"},
//     "rates": {"kind": "linear", "lambda1", "lambda2", "mu", "sigma_tilde"},
//     "sigma_bar", "R0" }
// Unknown or missing keys raise Error(ConfigFormat).

ModelConfig parse_config_json(const std::string& text);
ModelConfig load_config(const std::filesystem::path& path);

/// Only linear-rate configs are serializable.
std::string config_to_json(const ModelConfig& cfg);

}  // namespace trilayer
