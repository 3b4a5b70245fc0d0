#pragma once

#include "dmbmpc/simulator.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace dmbmpc::cli {

/// Reads an experiment config (or a run manifest embedding one) from a JSON file.
ExperimentConfig parse_config(const std::filesystem::path& path);

/// Parses and validates the config schema. Errors are ConfigError carrying the key path.
ExperimentConfig parse_config_json(const nlohmann::json& doc);

/// Inverse of parse_config_json; infinite bounds are written as "inf" / "-inf".
nlohmann::json emit_config(const ExperimentConfig& cfg);

}  // namespace dmbmpc::cli
