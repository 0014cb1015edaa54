#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zbw/dynamics.hpp"
#include "zbw/frenet.hpp"

namespace zbw::cli {

// Shortest round-trip text is not what we want for golden files; every value
// is written with exactly 17 significant digits.
std::string format_number(double x);

std::vector<std::string> trajectory_columns();
std::vector<std::string> diagnostics_columns();

// tau, x0..x3, pi0..pi3, v0..v3, psi0..psi7, H, p2, S12, S13, S23, S01, S02,
// S03, J01, J02, J03, J12, J13, J23. S and J are lower-index tensors.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
nlohmann::json trajectory_json(const Trajectory& traj);

// Per-sample drift of the conserved quantities and the spinor bilinears.
void write_diagnostics_csv(std::ostream& out, const Trajectory& traj);

// tau, e0_0..e3_3, K1, K2, K3, invariant, Omega (g01..g23).
void write_frenet_csv(std::ostream& out, const FrenetTrack& track, const Curvatures& K, double h);

}  // namespace zbw::cli
