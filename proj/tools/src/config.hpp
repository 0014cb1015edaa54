#pragma once

#include <string>

#include <json.hpp>

#include "zbw/dynamics.hpp"

namespace zbw::cli {

// Scenario files are JSON:
//   { "name": ..., "m": 1, "e": 0,
//     "field": {"kind": "free" | "constant" | "polynomial", "params": {...}},
//     "init": {"kind": "z" | "rotor", "values": {...}},
//     "tau_end": 31.4, "step": 0.001, "outputs": {"stride": 1} }
// Errors are ConfigError with the offending key path (or line/column for
// syntax errors) at the front of the message.
ScenarioConfig parse_config(const std::string& text, const std::string& default_name = "scenario");
ScenarioConfig load_config(const std::string& path);

// Normalized snapshot of a config, as it was actually run.
nlohmann::json config_to_json(const ScenarioConfig& cfg);

}  // namespace zbw::cli
