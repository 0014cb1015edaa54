#pragma once

#include <array>
#include <vector>

#include "zbw/clifford.hpp"

namespace zbw {

struct FrenetFrame {
  std::array<Multivector, 4> e;
  double tau = 0.0;

  // e^mu = eta^{mu mu} e_mu
  Multivector reciprocal(int mu) const { return e[mu] * kMetric[mu]; }
};

using FrameRate = std::array<Multivector, 4>;

// e_mu = R g_mu reverse(R). Throws RotorConstraintError unless R reverse(R) = 1 to 1e-10.
FrenetFrame frame_from_rotor(const Multivector& R, double tau = 0.0);

// Largest |e_mu . e_nu - eta_{mu nu}|.
double orthonormality_defect(const FrenetFrame& f);

// Omega = (1/2) sum_mu edot_mu ^ e^mu
Multivector darboux_bivector(const FrameRate& edot, const FrenetFrame& f);

// Omega = 2 <psi' psi^-1>_2. For psi = rho^(1/2) exp(beta g5/2) R at constant
// rho and beta this is 2 R' reverse(R).
Multivector angular_velocity(const Multivector& psi, const Multivector& dpsi);

// Second-order differences on a uniform grid: central inside, one-sided
// (-3 f0 + 4 f1 - f2) / 2h at the ends. Needs at least three samples.
std::vector<Multivector> finite_difference(const std::vector<Multivector>& f, double h);
std::vector<FrameRate> frame_derivatives(const std::vector<FrenetFrame>& frames, double h);

// |FD edot_mu - Omega . e_mu| for mu = 0..3, with Omega built from the same
// differences. Reported on interior samples only (index 1..n-2), where the
// central stencil applies.
std::vector<std::array<double, 4>> darboux_relation_residual(const std::vector<FrenetFrame>& frames,
                                                             double h);

struct Curvatures {
  std::vector<double> tau;
  std::vector<double> K1, K2, K3;
  // edot_0 . edot_0, which the Frenet equations make equal to -K1^2.
  std::vector<double> extrinsic;
  bool straight_line = false;
};

// K1 = edot_0 . e_1, K2 = edot_1 . e_2, K3 = edot_2 . e_3 from finite
// differences of the frames. If no frame moves by more than 1e-12 between
// samples the curve is flagged straight and every K is zero.
Curvatures curvatures_from_frame(const std::vector<FrenetFrame>& frames, double h);

// Omega = K1 e^1 e^0 + K2 e^2 e^1 + K3 e^3 e^2
Multivector darboux_from_curvatures(double K1, double K2, double K3, const FrenetFrame& f);

// K1^2 - K2^2 - K3^2. With the inner product used here it equals <Omega Omega>_0
// with no extra factor.
double darboux_invariant(double K1, double K2, double K3);
std::vector<double> darboux_invariant(const Curvatures& K);

// (m/e) Omega per sample. Throws std::domain_error for e = 0.
std::vector<Multivector> internal_field(const std::vector<FrenetFrame>& frames, double m, double e,
                                        double h);

struct FrenetTrack {
  std::vector<FrenetFrame> frames;
  // Index into the input samples of frames.front().
  std::size_t first_sample = 0;
  bool straight_line = false;
};

// Frenet tetrads of a world-line sampled through its velocity:
// e0 = v/|v|, e^1 along edot_0 (so K1 >= 0), e2 oriented so that K2 >= 0, and
// e3 completing a frame with e0 e1 e2 e3 = g5. Frames are produced only where
// the nested central differences exist, so two samples are dropped at each
// end. A straight world-line gets the boost frame of e0 and the straight flag.
// Throws NullCurveError if v is not time-like and InsufficientDataError for
// fewer than five samples.
FrenetTrack frenet_frames_from_velocity(const std::vector<Multivector>& v, double tau0, double h);

}  // namespace zbw
