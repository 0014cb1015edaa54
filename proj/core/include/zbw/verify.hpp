#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "zbw/clifford.hpp"
#include "zbw/dynamics.hpp"

namespace zbw {

struct ResidualReport {
  std::string equation;
  std::vector<double> points;     // tau, or the index of a spacetime sample point
  std::vector<double> residuals;  // coefficient norm of the residual multivector
  double max = 0.0;
  double rms = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Fills max, rms and pass from the residuals.
ResidualReport make_report(std::string equation, std::vector<double> points,
                           std::vector<double> residuals, double tolerance);

inline constexpr double kClosedFormTolerance = 1e-8;
inline constexpr double kFiniteDifferenceFloor = 1e-6;

// C in max(1e-6, C h^2): four times the worst finite-difference residual of the
// trivial solution on a grid of step h, divided by h^2.
double calibrate_fd_coefficient(double m, double h);
double fd_tolerance(double C, double h);

// A spinor field psi(x) with an optional closed-form gradient d_mu psi.
struct SpinorField {
  std::function<Multivector(const Multivector&)> value;
  std::function<std::array<Multivector, 4>(const Multivector&)> gradient;
};

// psi0 exp(-g2 g1 p.x). An eigenfunction of the momentum when psi0 satisfies
// p psi0 = m psi0 g0.
SpinorField plane_wave(const Multivector& psi0, const Multivector& p);

// psi'(x) = L psi(reverse(L) x L); the gradient is carried along when present.
SpinorField transport(const SpinorField& f, const Multivector& L);

// f + delta, with the same gradient. Used for negative controls.
SpinorField offset(const SpinorField& f, const Multivector& delta);

struct DerivativeOptions {
  bool closed_form = true;
  double spacing = 1e-4;  // central-difference spacing when !closed_form
};

// Coefficient-norm bound on the central-difference truncation error of
// d_mu psi for a plane wave of momentum p: 2 (h^2/6) |psi| sum_mu |p_mu|^3.
double plane_wave_fd_bound(const Multivector& p, double psi_norm, double h);

// d psi g1 g2 + m psi g0 + e A psi at each point.
ResidualReport dirac_hestenes_residual(const SpinorField& psi, const std::vector<Multivector>& points,
                                       double m, const EMField& A, const DerivativeOptions& opt,
                                       double tolerance);

struct LinearizationReport {
  ResidualReport eigen;      // d psi g2 g1 - p psi
  ResidualReport reduced;    // (p.d) psi g1 g2 + m p psi g0
  ResidualReport dirac;      // d psi g1 g2 + m psi g0
  ResidualReport streamline; // v.d psi g1 g2 + m psi^-1 v psi~^-1 psi g0, rest frame of p
  bool pass = false;
};

// The eigenfunction chain for a free field. Throws MassShellError off shell.
// The stream-line check is evaluated on the field pulled back to the rest
// frame of p, which is the frame where psi^-1 v psi~^-1 = p/m holds literally.
LinearizationReport linearization_check(const Multivector& p, double m, const SpinorField& psi,
                                        const std::vector<Multivector>& points,
                                        const DerivativeOptions& opt, double tolerance);

// psi' g1 g2 + m (psi^-1 v psi~^-1) psi g0 along a free run, with psi' from
// second-order differences of the samples. Runs whose p is not along g0 are
// first boosted to the rest frame of p. Throws SingularSpinorError with the
// sample's tau where psi is not invertible.
ResidualReport nonlinear_dirac_residual_on_line(const Trajectory& traj, double m, double tolerance);

// Same residual with the exact derivative supplied by the caller.
ResidualReport nonlinear_dirac_residual_on_line(const std::vector<double>& taus,
                                                const std::vector<DHSpinor>& psi,
                                                const std::vector<Multivector>& dpsi,
                                                const Multivector& p, double m, double tolerance);

struct MeanVelocityReport {
  Multivector time_average;  // (a)
  Multivector p_over_m;      // (b)
  ResidualReport a_vs_b;
  ResidualReport a_vs_c;     // per sample
  ResidualReport b_vs_c;     // per sample
  double c_variation = 0.0;  // max |c(tau) - c(0)|
  bool pass = false;
};

MeanVelocityReport mean_velocity_identity(const Trajectory& traj, double m, double tolerance,
                                          int periods = 1);

struct SpinMassReport {
  ResidualReport pv;        // |<p v>_0 - m|
  ResidualReport omega_s;   // |<Omega S>_0 - m|
  bool pass = false;
};

// Omega = 2 <psi' psi^-1>_2 with psi' from the equations of motion and
// S = (1/2) psi g2 g1 reverse(psi).
SpinMassReport spin_mass_identity(const Trajectory& traj, double m, double tolerance);

// Closed-form free family psi(tau) = free_spinor(psi0, p, m, tau).
SpinMassReport spin_mass_identity(const DHSpinor& psi0, const Multivector& p, double m,
                                  const std::vector<double>& taus, double tolerance);

}  // namespace zbw
