#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "config.hpp"
#include "export.hpp"
#include "suites.hpp"
#include "zbw/errors.hpp"
#include "zbw/frenet.hpp"
#include "zbw/spinor.hpp"
#include "zbw/verify.hpp"

namespace zbw::cli {
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kFormatVersion = 1;

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
  return f;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
}

void write_manifest(const std::string& out_dir, RunManifest& m) {
  const fs::path p = fs::path(out_dir) / "manifest.json";
  m.outputs.push_back(p.string());
  auto f = open_out(p);
  f << m.to_json().dump(2) << '\n';
}

std::string fixed(double x, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void print(std::ostream& out, const std::string& format) const {
    if (format == "json") {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& r : rows) {
        nlohmann::json o;
        for (std::size_t i = 0; i < columns.size(); ++i) o[columns[i]] = r[i];
        j.push_back(o);
      }
      out << j.dump(2) << '\n';
      return;
    }
    if (format == "csv") {
      for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
      out << '\n';
      for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
        out << '\n';
      }
      return;
    }
    std::vector<std::size_t> width(columns.size());
    for (std::size_t i = 0; i < columns.size(); ++i) width[i] = columns[i].size();
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    const auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        out << (i ? "  " : "") << std::left << std::setw(static_cast<int>(width[i])) << cells[i];
      }
      out << '\n';
    };
    line(columns);
    std::vector<std::string> rule;
    for (auto w : width) rule.push_back(std::string(w, '-'));
    line(rule);
    for (const auto& r : rows) line(r);
  }
};

std::vector<Multivector> velocities(const Trajectory& t) {
  std::vector<Multivector> v;
  for (const auto& d : t.diagnostics) v.push_back(d.v);
  return v;
}

struct Stats {
  double mean = 0.0, std = 0.0, min = 0.0, max = 0.0;
};

Stats stats(const std::vector<double>& x) {
  Stats s;
  if (x.empty()) return s;
  s.min = *std::min_element(x.begin(), x.end());
  s.max = *std::max_element(x.begin(), x.end());
  for (double v : x) s.mean += v;
  s.mean /= static_cast<double>(x.size());
  for (double v : x) s.std += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(s.std / static_cast<double>(x.size()));
  return s;
}

}  // namespace

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j = {{"command", command},
                      {"scenario", scenario},
                      {"config", config},
                      {"versions", {{"zbw", kVersion}, {"output_format", kFormatVersion}}},
                      {"outputs", outputs},
                      {"wall_seconds", wall_seconds},
                      {"status", status}};
  if (!error.empty()) j["error"] = error;
  return j;
}

ScenarioConfig load_with_overrides(const std::string& path, const Overrides& o) {
  ScenarioConfig cfg = load_config(path);
  if (o.step) cfg.step = *o.step;
  if (o.tau_end) cfg.tau_end = *o.tau_end;
  cfg.validate();
  return cfg;
}

RunManifest cmd_simulate(const ScenarioConfig& cfg, const std::string& out_dir, const std::string& format) {
  const auto t0 = std::chrono::steady_clock::now();
  ensure_dir(out_dir);
  RunManifest m;
  m.command = "simulate";
  m.scenario = cfg.name;
  m.config = config_to_json(cfg);
  // Whatever was integrated before a failure is still exported.
  const SimulationResult r = simulate_partial(cfg);
  const Trajectory& traj = r.trajectory;
  if (format == "json") {
    const fs::path p = fs::path(out_dir) / "trajectory.json";
    auto f = open_out(p);
    f << trajectory_json(traj).dump() << '\n';
    m.outputs.push_back(p.string());
  } else {
    const fs::path p = fs::path(out_dir) / "trajectory.csv";
    auto f = open_out(p);
    write_trajectory_csv(f, traj);
    m.outputs.push_back(p.string());
  }
  const fs::path d = fs::path(out_dir) / "diagnostics.csv";
  auto f = open_out(d);
  write_diagnostics_csv(f, traj);
  m.outputs.push_back(d.string());
  if (r.failed) {
    m.status = "failed";
    m.error = r.failure + " at tau = " + format_number(r.failure_tau);
  }
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out_dir, m);
  return m;
}

int cmd_verify(const std::string& suite, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = kSuiteNames;
  } else {
    if (std::find(kSuiteNames.begin(), kSuiteNames.end(), suite) == kSuiteNames.end()) {
      throw ConfigError("--suite: unknown suite '" + suite + "' (algebra, free, frenet, dirac, all)");
    }
    names = {suite};
  }

  const auto t0 = std::chrono::steady_clock::now();
  nlohmann::json reports = nlohmann::json::array();
  std::string first_failure;
  for (const auto& n : names) {
    const SuiteReport r = run_suite(n);
    for (const auto& c : r.checks) {
      out << (c.pass ? "PASS " : "FAIL ") << n << '/' << c.name << "  value=" << sci(c.value)
          << " tol=" << sci(c.tolerance);
      if (!c.detail.empty()) out << "  (" << c.detail << ')';
      out << '\n';
    }
    if (const Check* f = r.first_failure(); f && first_failure.empty()) first_failure = n + "/" + f->name;
    reports.push_back(r.to_json());
  }

  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    RunManifest m;
    m.command = "verify";
    m.scenario = suite;
    m.config = {{"suite", suite}};
    const fs::path p = fs::path(out_dir) / "report.json";
    {
      auto f = open_out(p);
      nlohmann::json j = {{"suite", suite}, {"pass", first_failure.empty()}, {"reports", reports}};
      if (!first_failure.empty()) j["first_failure"] = first_failure;
      f << j.dump(2) << '\n';
    }
    m.outputs.push_back(p.string());
    m.status = first_failure.empty() ? "ok" : "failed";
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(out_dir, m);
  }

  if (!first_failure.empty()) {
    err << "verify: check failed: " << first_failure << '\n';
    return kCheckFailed;
  }
  return kOk;
}

void cmd_table(const std::string& which, const ScenarioConfig& cfg, const std::string& format, std::ostream& out) {
  const Trajectory traj = simulate(cfg);
  const double m = cfg.m;
  Table t;
  if (which == "frequencies") {
    t.columns = {"component", "omega", "expected_2m", "rel_error", "within_0.1%"};
    for (int c = 1; c <= 3; ++c) {
      const std::string name = "v" + std::to_string(c);
      try {
        const double omega = measure_zbw_frequency(traj, c);
        const double rel = std::abs(omega / (2 * m) - 1);
        t.rows.push_back({name, fixed(omega, 6), fixed(2 * m, 3) + " +- " + fixed(2e-3 * m, 3), sci(rel),
                          rel <= 1e-3 ? "yes" : "no"});
      } catch (const InsufficientDataError&) {
        t.rows.push_back({name, "n/a", fixed(2 * m, 3) + " +- " + fixed(2e-3 * m, 3), "n/a", "no oscillation"});
      }
    }
  } else if (which == "identities") {
    std::vector<double> pv, os;
    for (const auto& s : traj.samples) {
      const Multivector p = s.pi + traj.field.potential(s.x) * traj.field.charge();
      const Multivector dpsi = eom_derivatives(s, traj.field).dpsi;
      pv.push_back(dot(p, velocity_bilinear(s.psi)));
      os.push_back(scalar_part(angular_velocity(s.psi.value(), dpsi) * spin_density_bivector(s.psi)));
    }
    t.columns = {"quantity", "mean", "max_abs_dev", "expected", "within_1e-6"};
    const auto row = [&](const std::string& name, const std::vector<double>& x) {
      double dev = 0.0;
      for (double v : x) dev = std::max(dev, std::abs(v - m));
      t.rows.push_back({name, fixed(stats(x).mean, 9), sci(dev), fixed(m, 3), dev <= 1e-6 ? "yes" : "no"});
    };
    row("<pv>_0", pv);
    row("<Omega S>_0", os);
  } else if (which == "curvatures") {
    const FrenetTrack track = frenet_frames_from_velocity(velocities(traj), traj.samples.front().tau, traj.h);
    const Curvatures K = curvatures_from_frame(track.frames, traj.h);
    t.columns = {"curvature", "mean", "std", "min", "max"};
    const auto row = [&](const std::string& name, const std::vector<double>& x) {
      const Stats s = stats(x);
      t.rows.push_back({name, fixed(s.mean, 9), sci(s.std), fixed(s.min, 9), fixed(s.max, 9)});
    };
    row("K1", K.K1);
    row("K2", K.K2);
    row("K3", K.K3);
    row("K1^2-K2^2-K3^2", darboux_invariant(K));
  } else {
    throw ConfigError("table: unknown table '" + which + "' (frequencies, identities, curvatures)");
  }
  t.print(out, format);
}

RunManifest cmd_frenet(const ScenarioConfig& cfg, const std::string& out_dir, const std::string& format) {
  const auto t0 = std::chrono::steady_clock::now();
  ensure_dir(out_dir);
  RunManifest m;
  m.command = "frenet";
  m.scenario = cfg.name;
  m.config = config_to_json(cfg);
  try {
    const Trajectory traj = simulate(cfg);
    const FrenetTrack track = frenet_frames_from_velocity(velocities(traj), traj.samples.front().tau, traj.h);
    const Curvatures K = curvatures_from_frame(track.frames, traj.h);
    std::ostringstream csv;
    write_frenet_csv(csv, track, K, traj.h);
    if (format == "json") {
      const fs::path p = fs::path(out_dir) / "frenet.json";
      nlohmann::json rows = nlohmann::json::array();
      std::istringstream in(csv.str());
      std::string line, header;
      std::getline(in, header);
      while (std::getline(in, line)) {
        nlohmann::json row = nlohmann::json::array();
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
      }
      nlohmann::json cols = nlohmann::json::array();
      std::istringstream hs(header);
      std::string c;
      while (std::getline(hs, c, ',')) cols.push_back(c);
      auto f = open_out(p);
      f << nlohmann::json{{"columns", cols}, {"straight_line", track.straight_line}, {"rows", rows}}.dump() << '\n';
      m.outputs.push_back(p.string());
    } else {
      const fs::path p = fs::path(out_dir) / "frenet.csv";
      auto f = open_out(p);
      f << csv.str();
      m.outputs.push_back(p.string());
    }
  } catch (const Error& e) {
    m.status = "failed";
    m.error = e.what();
  }
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(out_dir, m);
  return m;
}

}  // namespace zbw::cli
