#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "zbw/errors.hpp"
#include "zbw/matrix_rep.hpp"

using namespace zbw;
using namespace zbw::cli;

namespace {

int print_manifest_result(const RunManifest& m) {
  if (m.status != "ok") {
    std::cerr << m.command << ": " << m.error << '\n';
    return kNumeric;
  }
  for (const auto& p : m.outputs) std::cout << p << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cl(1,3) zitterbewegung simulator and equation checker"};
  app.require_subcommand(1);

  std::string config, out_dir = "out", suite = "all", format;
  std::optional<double> step, tau_end;

  auto* sim = app.add_subcommand("simulate", "integrate a scenario and export the trajectory");
  sim->add_option("--config", config, "scenario file (JSON)")->required();
  sim->add_option("--out", out_dir, "output directory");
  sim->add_option("--step", step, "override the RK4 step");
  sim->add_option("--tau-end", tau_end, "override the final proper time");
  sim->add_option("--format", format, "trajectory format")->check(CLI::IsMember({"csv", "json"}));

  auto* ver = app.add_subcommand("verify", "run the residual and identity suites");
  ver->add_option("--suite", suite, "algebra, free, frenet, dirac or all")
      ->check(CLI::IsMember({"algebra", "free", "frenet", "dirac", "all"}));
  std::string verify_out;
  ver->add_option("--out", verify_out, "directory for report.json");

  auto* tab = app.add_subcommand("table", "print a summary table for a scenario");
  std::string which;
  tab->add_option("which", which, "frequencies, identities or curvatures")
      ->required()
      ->check(CLI::IsMember({"frequencies", "identities", "curvatures"}));
  tab->add_option("--config", config, "scenario file (JSON)")->required();
  tab->add_option("--step", step, "override the RK4 step");
  tab->add_option("--tau-end", tau_end, "override the final proper time");
  tab->add_option("--format", format, "text (default), csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));

  auto* fre = app.add_subcommand("frenet", "Frenet frames and curvatures along a scenario");
  fre->add_option("--config", config, "scenario file (JSON)")->required();
  fre->add_option("--out", out_dir, "output directory");
  fre->add_option("--step", step, "override the RK4 step");
  fre->add_option("--tau-end", tau_end, "override the final proper time");
  fre->add_option("--format", format, "csv (default) or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  // The product table and the Dirac matrices are two separate derivations;
  // nothing that depends on the algebra runs if they disagree. verify still
  // runs so that the failure is reported check by check.
  const auto mismatch = find_sign_table_mismatch();
  if (mismatch) {
    std::cerr << "warning: geometric product disagrees with the Dirac matrices at blades "
              << index_of(mismatch->left) << " * " << index_of(mismatch->right) << '\n';
  }

  try {
    const Overrides o{step, tau_end};
    if (*ver) return cmd_verify(suite, verify_out, std::cout, std::cerr);
    if (mismatch) {
      std::cerr << "refusing to run with an inconsistent product table\n";
      return kNumeric;
    }
    if (*sim) return print_manifest_result(cmd_simulate(load_with_overrides(config, o), out_dir, format));
    if (*fre) return print_manifest_result(cmd_frenet(load_with_overrides(config, o), out_dir, format));
    if (*tab) {
      cmd_table(which, load_with_overrides(config, o), format.empty() ? "text" : format, std::cout);
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalOverflowError& e) {
    std::cerr << "numeric error: " << e.what() << " (tau = " << e.tau() << ")\n";
    return kNumeric;
  } catch (const Error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}
