#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zbw/dynamics.hpp"

namespace zbw::cli {

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;

  bool pass() const;
  // Null when everything passed.
  const Check* first_failure() const;
  nlohmann::json to_json() const;
};

inline const std::vector<std::string> kSuiteNames = {"algebra", "free", "frenet", "dirac"};

// Throws ConfigError for an unknown name. "all" is handled by the caller.
SuiteReport run_suite(const std::string& name);

// Scenarios shared by the suites and the tables.
// Circular free helix: psi0 = rho^(1/2) exp(g0 g1 w/2) with rho = 1/cosh w, so H = m.
ScenarioConfig boosted_helix_scenario(double m, double w, double h, double tau_end);
ScenarioConfig trivial_scenario(double m, double h, double tau_end);

}  // namespace zbw::cli
