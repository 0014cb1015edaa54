#include "zbw/frenet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "zbw/errors.hpp"
#include "zbw/spinor.hpp"

namespace zbw {
namespace {

Multivector unit(const Multivector& a) {
  const double n2 = std::abs(dot(a, a));
  return a / std::sqrt(n2);
}

// a minus its components along the orthonormal vectors basis[0..count).
Multivector reject(Multivector a, const std::array<Multivector, 4>& basis, int count) {
  const Multivector a0 = a;
  for (int mu = 0; mu < count; ++mu) {
    a -= basis[mu] * (dot(a0, basis[mu]) / dot(basis[mu], basis[mu]));
  }
  return a;
}

Multivector complete_orientation(const std::array<Multivector, 4>& e) {
  // For a proper frame e0 e1 e2 g5 = -e3.
  return -grade_projection(e[0] * e[1] * e[2] * kPseudoscalar, 1);
}

}  // namespace

FrenetFrame frame_from_rotor(const Multivector& R, double tau) {
  if (!is_rotor(R)) throw RotorConstraintError("frame_from_rotor: R reverse(R) != 1");
  FrenetFrame f;
  f.tau = tau;
  const Multivector Rr = reversion(R);
  for (int mu = 0; mu < 4; ++mu) f.e[mu] = grade_projection(R * gamma(mu) * Rr, 1);
  return f;
}

double orthonormality_defect(const FrenetFrame& f) {
  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const double target = mu == nu ? kMetric[mu] : 0.0;
      worst = std::max(worst, std::abs(dot(f.e[mu], f.e[nu]) - target));
    }
  }
  return worst;
}

Multivector darboux_bivector(const FrameRate& edot, const FrenetFrame& f) {
  Multivector omega;
  for (int mu = 0; mu < 4; ++mu) omega += wedge(edot[mu], f.reciprocal(mu));
  return grade_projection(omega, 2) * 0.5;
}

Multivector angular_velocity(const Multivector& psi, const Multivector& dpsi) {
  return grade_projection(dpsi * inverse(psi), 2) * 2.0;
}

std::vector<Multivector> finite_difference(const std::vector<Multivector>& f, double h) {
  const std::size_t n = f.size();
  if (n < 3) throw InsufficientDataError("finite_difference: need at least three samples");
  std::vector<Multivector> d(n);
  d[0] = (f[0] * -3.0 + f[1] * 4.0 - f[2]) / (2.0 * h);
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (f[k + 1] - f[k - 1]) / (2.0 * h);
  d[n - 1] = (f[n - 1] * 3.0 - f[n - 2] * 4.0 + f[n - 3]) / (2.0 * h);
  return d;
}

std::vector<FrameRate> frame_derivatives(const std::vector<FrenetFrame>& frames, double h) {
  if (frames.size() < 3) throw InsufficientDataError("frame_derivatives: need at least three frames");
  std::vector<FrameRate> out(frames.size());
  std::vector<Multivector> axis(frames.size());
  for (int mu = 0; mu < 4; ++mu) {
    for (std::size_t k = 0; k < frames.size(); ++k) axis[k] = frames[k].e[mu];
    const auto d = finite_difference(axis, h);
    for (std::size_t k = 0; k < frames.size(); ++k) out[k][mu] = d[k];
  }
  return out;
}

std::vector<std::array<double, 4>> darboux_relation_residual(const std::vector<FrenetFrame>& frames,
                                                             double h) {
  if (frames.size() < 3) throw InsufficientDataError("darboux_relation_residual: need at least three frames");
  const auto d = frame_derivatives(frames, h);
  std::vector<std::array<double, 4>> out;
  out.reserve(frames.size() - 2);
  for (std::size_t k = 1; k + 1 < frames.size(); ++k) {
    const Multivector omega = darboux_bivector(d[k], frames[k]);
    std::array<double, 4> r{};
    for (int mu = 0; mu < 4; ++mu) {
      r[mu] = norm(d[k][mu] - grade_projection(inner(omega, frames[k].e[mu]), 1));
    }
    out.push_back(r);
  }
  return out;
}

Curvatures curvatures_from_frame(const std::vector<FrenetFrame>& frames, double h) {
  if (frames.size() < 3) throw InsufficientDataError("curvatures_from_frame: need at least three frames");
  const std::size_t n = frames.size();
  Curvatures K;
  K.tau.resize(n);
  K.K1.assign(n, 0.0);
  K.K2.assign(n, 0.0);
  K.K3.assign(n, 0.0);
  K.extrinsic.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) K.tau[k] = frames[k].tau;

  double motion = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    for (int mu = 0; mu < 4; ++mu) motion = std::max(motion, norm(frames[k + 1].e[mu] - frames[k].e[mu]));
  }
  if (motion <= 1e-12) {
    K.straight_line = true;
    return K;
  }

  const auto d = frame_derivatives(frames, h);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& e = frames[k].e;
    K.K1[k] = dot(d[k][0], e[1]);
    K.K2[k] = dot(d[k][1], e[2]);
    K.K3[k] = dot(d[k][2], e[3]);
    K.extrinsic[k] = dot(d[k][0], d[k][0]);
  }
  return K;
}

Multivector darboux_from_curvatures(double K1, double K2, double K3, const FrenetFrame& f) {
  const Multivector omega = f.reciprocal(1) * f.reciprocal(0) * K1 +
                            f.reciprocal(2) * f.reciprocal(1) * K2 +
                            f.reciprocal(3) * f.reciprocal(2) * K3;
  return grade_projection(omega, 2);
}

double darboux_invariant(double K1, double K2, double K3) { return K1 * K1 - K2 * K2 - K3 * K3; }

std::vector<double> darboux_invariant(const Curvatures& K) {
  std::vector<double> out(K.K1.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = darboux_invariant(K.K1[k], K.K2[k], K.K3[k]);
  return out;
}

std::vector<Multivector> internal_field(const std::vector<FrenetFrame>& frames, double m, double e,
                                        double h) {
  if (e == 0.0) throw std::domain_error("internal_field: charge must be non-zero");
  const auto d = frame_derivatives(frames, h);
  std::vector<Multivector> out(frames.size());
  for (std::size_t k = 0; k < frames.size(); ++k) out[k] = darboux_bivector(d[k], frames[k]) * (m / e);
  return out;
}

FrenetTrack frenet_frames_from_velocity(const std::vector<Multivector>& v, double tau0, double h) {
  const std::size_t n = v.size();
  if (n < 5) throw InsufficientDataError("frenet_frames_from_velocity: need at least five samples");

  std::vector<Multivector> e0(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double v2 = dot(v[k], v[k]);
    if (!(v2 > 0.0)) {
      throw NullCurveError("frenet_frames_from_velocity: tangent is not time-like at tau = " +
                           std::to_string(tau0 + static_cast<double>(k) * h));
    }
    e0[k] = grade_projection(v[k], 1) / std::sqrt(v2);
  }

  // Curvature of e0 at interior samples.
  std::vector<Multivector> e1(n);
  std::vector<double> K1(n, 0.0);
  double K1max = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Multivector d0 = (e0[k + 1] - e0[k - 1]) / (2.0 * h);
    K1[k] = std::sqrt(std::max(0.0, -dot(d0, d0)));
    K1max = std::max(K1max, K1[k]);
    if (K1[k] > 0.0) e1[k] = -d0 / K1[k];
  }

  FrenetTrack track;
  track.first_sample = 2;
  const double flat = 1e-8;
  if (K1max <= flat) {
    track.straight_line = true;
    for (std::size_t k = 2; k + 2 < n; ++k) {
      FrenetFrame f = frame_from_rotor(boost_to(e0[k]), tau0 + static_cast<double>(k) * h);
      track.frames.push_back(f);
    }
    return track;
  }

  for (std::size_t k = 2; k + 2 < n; ++k) {
    if (K1[k - 1] <= flat || K1[k] <= flat || K1[k + 1] <= flat) {
      throw Error("frenet_frames_from_velocity: curvature vanishes at tau = " +
                  std::to_string(tau0 + static_cast<double>(k) * h));
    }
    std::array<Multivector, 4> e;
    e[0] = e0[k];
    e[1] = e1[k];
    const Multivector d1 = (e1[k + 1] - e1[k - 1]) / (2.0 * h);
    const Multivector w = reject(d1, e, 2);
    const double K2 = std::sqrt(std::max(0.0, -dot(w, w)));
    if (K2 > flat * std::max(1.0, K1[k])) {
      // edot_1 has the component K2 e^2 = -K2 e_2 off the (e0, e1) plane.
      e[2] = -w / K2;
    } else {
      // Planar curve: any unit vector orthogonal to e0, e1 will do; take
      // the most orthogonal spatial axis.
      Multivector best;
      double best_norm = -1.0;
      for (int i = 1; i < 4; ++i) {
        const Multivector c = reject(gamma(i), e, 2);
        const double cn = -dot(c, c);
        if (cn > best_norm) {
          best_norm = cn;
          best = c;
        }
      }
      e[2] = unit(best);
    }
    e[3] = unit(complete_orientation(e));

    FrenetFrame f;
    f.e = e;
    f.tau = tau0 + static_cast<double>(k) * h;
    track.frames.push_back(f);
  }
  return track;
}

}  // namespace zbw
