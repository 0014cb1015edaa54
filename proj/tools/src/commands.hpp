#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zbw/dynamics.hpp"

namespace zbw::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kNumeric = 3 };

struct Overrides {
  std::optional<double> step;
  std::optional<double> tau_end;
};

struct RunManifest {
  std::string command;
  std::string scenario;
  nlohmann::json config;
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;
  std::string status = "ok";
  std::string error;

  nlohmann::json to_json() const;
};

// Load and apply --step / --tau-end, then validate again.
ScenarioConfig load_with_overrides(const std::string& path, const Overrides& o);

// Writes trajectory.{csv|json}, diagnostics.csv and manifest.json into out_dir.
RunManifest cmd_simulate(const ScenarioConfig& cfg, const std::string& out_dir, const std::string& format);

// Runs the suites and writes report.json into out_dir when one is given.
// Returns the exit code; the first failing check is reported on err.
int cmd_verify(const std::string& suite, const std::string& out_dir, std::ostream& out, std::ostream& err);

// which: frequencies, identities, curvatures. format: text, csv or json.
void cmd_table(const std::string& which, const ScenarioConfig& cfg, const std::string& format, std::ostream& out);

// Writes frenet.{csv|json} and manifest.json into out_dir.
RunManifest cmd_frenet(const ScenarioConfig& cfg, const std::string& out_dir, const std::string& format);

}  // namespace zbw::cli
