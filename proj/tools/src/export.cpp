#include "export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "zbw/spinor.hpp"

namespace zbw::cli {
namespace {

constexpr std::array<std::array<int, 2>, 6> kPairs = {{{1, 2}, {1, 3}, {2, 3}, {0, 1}, {0, 2}, {0, 3}}};
constexpr std::array<std::array<int, 2>, 6> kJPairs = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

void write_row(std::ostream& out, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << format_number(row[i]);
  }
  out << '\n';
}

void write_header(std::ostream& out, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out << ',';
    out << cols[i];
  }
  out << '\n';
}

std::vector<double> trajectory_row(const BZState& s, const Diagnostics& d) {
  std::vector<double> row;
  row.reserve(40);
  row.push_back(s.tau);
  for (double c : s.x.vector_part()) row.push_back(c);
  for (double c : s.pi.vector_part()) row.push_back(c);
  for (double c : d.v.vector_part()) row.push_back(c);
  for (double c : s.psi.components()) row.push_back(c);
  row.push_back(d.H);
  row.push_back(d.p2);
  const Tensor4 S = spin_tensor(d.S);
  for (const auto& [a, b] : kPairs) row.push_back(S[a][b]);
  for (const auto& [a, b] : kJPairs) row.push_back(d.J[a][b]);
  return row;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::vector<std::string> trajectory_columns() {
  std::vector<std::string> c = {"tau"};
  for (int i = 0; i < 4; ++i) c.push_back("x" + std::to_string(i));
  for (int i = 0; i < 4; ++i) c.push_back("pi" + std::to_string(i));
  for (int i = 0; i < 4; ++i) c.push_back("v" + std::to_string(i));
  for (int i = 0; i < 8; ++i) c.push_back("psi" + std::to_string(i));
  c.push_back("H");
  c.push_back("p2");
  for (const auto& [a, b] : kPairs) c.push_back("S" + std::to_string(a) + std::to_string(b));
  for (const auto& [a, b] : kJPairs) c.push_back("J" + std::to_string(a) + std::to_string(b));
  return c;
}

std::vector<std::string> diagnostics_columns() {
  return {"tau", "H", "dH", "p2", "dp2", "dJ_max", "zbarz", "rho", "beta", "psi_norm"};
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  write_header(out, trajectory_columns());
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    write_row(out, trajectory_row(traj.samples[k], traj.diagnostics[k]));
  }
}

nlohmann::json trajectory_json(const Trajectory& traj) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    rows.push_back(trajectory_row(traj.samples[k], traj.diagnostics[k]));
  }
  return {{"columns", trajectory_columns()}, {"h", traj.h}, {"m", traj.mass}, {"rows", rows}};
}

void write_diagnostics_csv(std::ostream& out, const Trajectory& traj) {
  write_header(out, diagnostics_columns());
  if (traj.diagnostics.empty()) return;
  const Diagnostics& d0 = traj.diagnostics.front();
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const Diagnostics& d = traj.diagnostics[k];
    double dJ = 0.0;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) dJ = std::max(dJ, std::abs(d.J[a][b] - d0.J[a][b]));
    }
    write_row(out, {traj.samples[k].tau, d.H, d.H - d0.H, d.p2, d.p2 - d0.p2, dJ, d.zbarz, d.rho, d.beta,
                    norm(traj.samples[k].psi.value())});
  }
}

void write_frenet_csv(std::ostream& out, const FrenetTrack& track, const Curvatures& K, double h) {
  std::vector<std::string> cols = {"tau"};
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) cols.push_back("e" + std::to_string(mu) + "_" + std::to_string(nu));
  }
  for (const char* c : {"K1", "K2", "K3", "invariant", "Omega01", "Omega02", "Omega03", "Omega12", "Omega13",
                        "Omega23"}) {
    cols.push_back(c);
  }
  write_header(out, cols);
  const auto& frames = track.frames;
  std::vector<FrameRate> d;
  if (frames.size() >= 3 && !K.straight_line) d = frame_derivatives(frames, h);
  for (std::size_t k = 0; k < frames.size(); ++k) {
    std::vector<double> row = {frames[k].tau};
    for (int mu = 0; mu < 4; ++mu) {
      for (double c : frames[k].e[mu].vector_part()) row.push_back(c);
    }
    row.push_back(K.K1[k]);
    row.push_back(K.K2[k]);
    row.push_back(K.K3[k]);
    row.push_back(darboux_invariant(K.K1[k], K.K2[k], K.K3[k]));
    const Multivector omega = d.empty() ? Multivector() : darboux_bivector(d[k], frames[k]);
    for (double c : omega.bivector_part()) row.push_back(c);
    write_row(out, row);
  }
}

}  // namespace zbw::cli
