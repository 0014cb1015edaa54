// Acceptance run: one PASS/FAIL line per criterion.
//
// Every criterion is checked twice where the library offers its own check:
// once through the library routine and once from the test-side oracles
// (hand-written Dirac matrices, long-double closed forms, a separate Frenet
// construction). A criterion passes only when both routes pass.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "zbw/dynamics.hpp"
#include "zbw/frenet.hpp"
#include "zbw/spinor.hpp"
#include "zbw/verify.hpp"

using namespace zbw;
using oracle::cd;
using oracle::Mat;

namespace {

constexpr double kPi = std::numbers::pi;

struct Sub {
  std::string name;
  double value;
  double lo;  // pass when lo <= value <= hi
  double hi;
  bool pass() const { return std::isfinite(value) && value >= lo && value <= hi; }
};

Sub upper(std::string name, double value, double tol) { return {std::move(name), value, -INFINITY, tol}; }
Sub band(std::string name, double value, double lo, double hi) { return {std::move(name), value, lo, hi}; }

struct Criterion {
  int id;
  std::string name;
  std::vector<Sub> subs;
  std::string error;
  double seconds = 0.0;

  bool pass() const {
    if (!error.empty() || subs.empty()) return false;
    return std::all_of(subs.begin(), subs.end(), [](const Sub& s) { return s.pass(); });
  }
};

// ------------------------------------------------------------ matrix helpers

const Mat& G(int mu) { return oracle::gammas()[mu]; }
Mat I4() { return Mat::Identity(); }

// Reverse in the Dirac representation: g0 M^dagger g0.
Mat rev(const Mat& M) { return G(0) * M.adjoint() * G(0); }

// Coefficient norm: every blade matrix is unitary and the blades are
// orthogonal under the trace, so |M|_F = 2 |coefficients|.
double cnorm(const Mat& M) { return M.norm() / 2.0; }

double scalar(const Mat& M) { return M.trace().real() / 4.0; }

Mat vec(const std::array<double, 4>& up) {
  Mat m = Mat::Zero();
  for (int mu = 0; mu < 4; ++mu) m += up[mu] * G(mu);
  return m;
}

Mat vec(const Multivector& a) { return vec(a.vector_part()); }

// Upper components of a vector matrix: a^mu = eta^{mu mu} <a g_mu>_0.
std::array<double, 4> components(const Mat& a) {
  std::array<double, 4> out{};
  for (int mu = 0; mu < 4; ++mu) out[mu] = oracle::eta[mu] * scalar(a * G(mu));
  return out;
}

double mdot(const Mat& a, const Mat& b) { return scalar(0.5 * (a * b + b * a)); }

Mat grade2(const Mat& M) {
  const Multivector a = oracle::unrep(M);
  return oracle::rep(grade_projection(a, 2));
}

Mat exp_plane(const Mat& B, double angle) {
  // B^2 = -1: cos + B sin. B^2 = +1: cosh + B sinh.
  const double sq = scalar(B * B);
  if (sq < 0) return std::cos(angle) * I4() + std::sin(angle) * B;
  return std::cosh(angle) * I4() + std::sinh(angle) * B;
}

const Mat& G21() {
  static const Mat m = G(2) * G(1);
  return m;
}
const Mat& G12() {
  static const Mat m = G(1) * G(2);
  return m;
}

std::array<double, 4> v_of(const Multivector& psi) { return oracle::current(oracle::column(psi)); }

double max_abs4(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  double w = 0;
  for (int i = 0; i < 4; ++i) w = std::max(w, std::abs(a[i] - b[i]));
  return w;
}

// ------------------------------------------------------------ scenarios

ScenarioConfig generic(double m, double h, double tau_end) {
  ScenarioConfig c = default_scenario(m);
  c.step = h;
  c.tau_end = tau_end;
  return c;
}

// psi0 = rho^(1/2) exp(g0 g1 w/2), rho = 1/cosh w, so that H = m.
ScenarioConfig circular(double m, double w, double h, double tau_end) {
  ScenarioConfig c;
  c.name = "circular";
  c.m = m;
  c.init.kind = InitialCondition::Kind::rotor;
  c.init.rho = 1.0 / std::cosh(w);
  c.init.rotor = Multivector::scalar(std::cosh(w / 2)) + gamma(0) * gamma(1) * std::sinh(w / 2);
  c.step = h;
  c.tau_end = tau_end;
  return c;
}

// ------------------------------------------------------------ 1

Criterion algebra() {
  Criterion c{1, "algebra_oracle", {}, {}};
  int mismatches = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < kBladeCount; ++i) {
    for (std::size_t j = 0; j < kBladeCount; ++j) {
      const Multivector lib = Multivector::blade(static_cast<Blade>(i)) * Multivector::blade(static_cast<Blade>(j));
      const Multivector ora = oracle::unrep(oracle::blades()[i] * oracle::blades()[j]);
      for (std::size_t k = 0; k < kBladeCount; ++k) {
        const double r = std::round(ora[k]);
        worst = std::max(worst, std::abs(ora[k] - r));
        if (lib[k] != r) ++mismatches;
      }
    }
  }
  c.subs.push_back(upper("blade_pair_mismatches_of_256", mismatches, 0));
  c.subs.push_back(upper("oracle_integrality", worst, 1e-12));

  int law = 0, matrix = 0;
  for (std::size_t k = 0; k < kBladeCount; ++k) {
    const int g = kBladeGrade[k];
    const double sign = (g * (g - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    const Multivector b = Multivector::blade(static_cast<Blade>(k));
    if (reversion(b) != b * sign) ++law;
    if ((rev(oracle::blades()[k]) - sign * oracle::blades()[k]).norm() > 1e-14) ++matrix;
  }
  c.subs.push_back(upper("reversion_grade_law_failures", law, 0));
  c.subs.push_back(upper("reversion_matrix_failures", matrix, 0));
  return c;
}

// ------------------------------------------------------------ 2, 3

using ld = long double;
using cld = std::complex<ld>;
using MatL = std::array<std::array<cld, 4>, 4>;
using ColL = std::array<cld, 4>;

MatL to_ld(const Mat& M) {
  MatL out{};
  for (int r = 0; r < 4; ++r) {
    for (int s = 0; s < 4; ++s) out[r][s] = cld(M(r, s).real(), M(r, s).imag());
  }
  return out;
}

ColL mul(const MatL& M, const ColL& z) {
  ColL out{};
  for (int r = 0; r < 4; ++r) {
    for (int s = 0; s < 4; ++s) out[r] += M[r][s] * z[s];
  }
  return out;
}

// Re(z^dagger g0 g_mu w) eta^{mu mu}
ld bilinear(int mu, const ColL& z, const ColL& w) {
  const ColL gw = mul(to_ld(G(0) * G(mu)), w);
  cld s = 0;
  for (int r = 0; r < 4; ++r) s += std::conj(z[r]) * gw[r];
  return oracle::eta[mu] * s.real();
}

struct ClosedFormVelocity {
  std::array<ld, 4> v0{}, a0{}, p{};
  ld m = 1, H = 0;

  // v = pH/m^2 + (v0 - pH/m^2) cos 2m tau + a0 sin 2m tau / 2m
  std::array<double, 4> at(double tau) const {
    std::array<double, 4> out{};
    const ld c = std::cos(2 * m * ld(tau)), s = std::sin(2 * m * ld(tau));
    for (int mu = 0; mu < 4; ++mu) {
      const ld drift = p[mu] * H / (m * m);
      out[mu] = static_cast<double>(drift + (v0[mu] - drift) * c + a0[mu] * s / (2 * m));
    }
    return out;
  }
};

ClosedFormVelocity closed_form_velocity(const BZState& s0, double m) {
  ClosedFormVelocity f;
  f.m = m;
  const oracle::Col zc = oracle::column(s0.psi.value());
  ColL z{};
  for (int r = 0; r < 4; ++r) z[r] = cld(zc(r).real(), zc(r).imag());
  const auto pu = s0.pi.vector_part();
  // z' = -i gamma_mu p^mu z
  MatL P{};
  {
    Mat Pm = Mat::Zero();
    for (int mu = 0; mu < 4; ++mu) Pm += pu[mu] * G(mu);
    P = to_ld(Pm);
  }
  ColL dz = mul(P, z);
  for (auto& x : dz) x *= cld(0, -1);
  for (int mu = 0; mu < 4; ++mu) {
    f.p[mu] = pu[mu];
    f.v0[mu] = bilinear(mu, z, z);
    f.a0[mu] = 2 * bilinear(mu, z, dz);
  }
  f.H = f.p[0] * f.v0[0] - f.p[1] * f.v0[1] - f.p[2] * f.v0[2] - f.p[3] * f.v0[3];
  return f;
}

double velocity_error(const Trajectory& t) {
  const ClosedFormVelocity f = closed_form_velocity(t.samples.front(), t.mass);
  double worst = 0.0;
  for (const auto& s : t.samples) worst = std::max(worst, max_abs4(v_of(s.psi.value()), f.at(s.tau)));
  return worst;
}

Criterion free_solution(const Trajectory& run) {
  Criterion c{2, "free_solution_reproduction", {}, {}};
  const double e1 = velocity_error(run);
  const double e2 = velocity_error(simulate(generic(1.0, 5e-4, 10 * kPi)));
  c.subs.push_back(upper("max_velocity_error_h1e-3", e1, 1e-6));
  c.subs.push_back(band("halving_ratio", e1 / e2, 12.0, 20.0));
  return c;
}

Criterion conservation(const Trajectory& run) {
  Criterion c{3, "conservation", {}, {}};
  const double m = run.mass;
  double dH = 0, dp2 = 0, dJ = 0, lib_H = 0, lib_p2 = 0, lib_J = 0;
  std::array<std::array<double, 4>, 4> J0{};
  const Conserved lib0 = conserved_quantities(run.samples.front());
  for (std::size_t k = 0; k < run.samples.size(); ++k) {
    const BZState& s = run.samples[k];
    const oracle::Col z = oracle::column(s.psi.value());
    const auto v = oracle::current(z);
    const auto pi = s.pi.vector_part();
    const auto x = s.x.vector_part();
    const auto S = oracle::spin(z);
    dH = std::max(dH, std::abs(oracle::mdot(pi, v) - m));
    dp2 = std::max(dp2, std::abs(oracle::mdot(pi, pi) - m * m));
    std::array<std::array<double, 4>, 4> J{};
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        J[a][b] = oracle::eta[a] * x[a] * oracle::eta[b] * pi[b] - oracle::eta[b] * x[b] * oracle::eta[a] * pi[a] +
                  S[a][b];
      }
    }
    if (k == 0) J0 = J;
    const Conserved lib = conserved_quantities(s);
    lib_H = std::max(lib_H, std::abs(lib.H - m));
    lib_p2 = std::max(lib_p2, std::abs(lib.p2 - m * m));
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        dJ = std::max(dJ, std::abs(J[a][b] - J0[a][b]));
        lib_J = std::max(lib_J, std::abs(lib.J[a][b] - lib0.J[a][b]));
      }
    }
  }
  c.subs.push_back(upper("H_minus_m_oracle", dH, 1e-8));
  c.subs.push_back(upper("H_minus_m_library", lib_H, 1e-8));
  c.subs.push_back(upper("p2_minus_m2_oracle", dp2, 1e-9));
  c.subs.push_back(upper("p2_minus_m2_library", lib_p2, 1e-9));
  c.subs.push_back(upper("J_drift_oracle", dJ, 1e-8));
  c.subs.push_back(upper("J_drift_library", lib_J, 1e-8));
  return c;
}

// ------------------------------------------------------------ 4

// Angular frequency from upward crossings of the run average.
double upcrossing_frequency(const Trajectory& t, int component) {
  std::vector<double> y;
  for (const auto& s : t.samples) y.push_back(v_of(s.psi.value())[component]);
  double area = 0;
  for (std::size_t k = 0; k + 1 < y.size(); ++k) area += 0.5 * (y[k] + y[k + 1]);
  const double level = area / static_cast<double>(y.size() - 1);
  std::vector<double> times;
  for (std::size_t k = 0; k + 1 < y.size(); ++k) {
    if (y[k] < level && y[k + 1] >= level) {
      const double f = (level - y[k]) / (y[k + 1] - y[k]);
      times.push_back(t.samples[k].tau + f * t.h);
    }
  }
  if (times.size() < 2) return NAN;
  return 2 * kPi * static_cast<double>(times.size() - 1) / (times.back() - times.front());
}

Criterion zbw_frequency() {
  Criterion c{4, "zbw_frequency", {}, {}};
  for (double m : {0.5, 1.0, 2.0}) {
    const Trajectory t = simulate(default_scenario(m));
    const std::string tag = "_m" + std::to_string(m).substr(0, 3);
    c.subs.push_back(upper("rel_error_oracle" + tag, std::abs(upcrossing_frequency(t, 1) / (2 * m) - 1), 1e-3));
    c.subs.push_back(upper("rel_error_library" + tag, std::abs(measure_zbw_frequency(t, 1) / (2 * m) - 1), 1e-3));
  }
  return c;
}

// ------------------------------------------------------------ 5

struct Wave {
  Mat L, R0, psi0, P;
  std::array<double, 4> p{};  // upper
  double m;

  // psi(x) = psi0 exp(-g21 p.x)
  Mat value(const std::array<double, 4>& x) const { return psi0 * exp_plane(-G21(), oracle::mdot(p, x)); }
  // d_mu psi = -p_mu psi g21
  std::array<Mat, 4> gradient(const std::array<double, 4>& x) const {
    std::array<Mat, 4> g;
    for (int mu = 0; mu < 4; ++mu) g[mu] = -oracle::eta[mu] * p[mu] * value(x) * G21();
    return g;
  }
  std::array<Mat, 4> fd_gradient(const std::array<double, 4>& x, double h) const {
    std::array<Mat, 4> g;
    for (int mu = 0; mu < 4; ++mu) {
      auto a = x, b = x;
      a[mu] += h;
      b[mu] -= h;
      g[mu] = (value(a) - value(b)) / (2 * h);
    }
    return g;
  }
  // Rest frame of p: psi_r(x') = R0 exp(-g21 m x'^0).
  Mat rest_value(const std::array<double, 4>& x) const { return R0 * exp_plane(-G21(), m * x[0]); }
};

Wave make_wave(const Mat& L, const Mat& R0, double m) {
  Wave w;
  w.L = L;
  w.R0 = R0;
  w.psi0 = L * R0;
  w.m = m;
  w.P = m * L * G(0) * rev(L);
  w.p = components(w.P);
  return w;
}

// d psi = g^mu d_mu psi
Mat dirac_op(const std::array<Mat, 4>& g) {
  Mat d = Mat::Zero();
  for (int mu = 0; mu < 4; ++mu) d += oracle::eta[mu] * G(mu) * g[mu];
  return d;
}

struct WaveResiduals {
  double dirac = 0, eigen = 0, stream = 0;
};

WaveResiduals wave_residuals(const Wave& w, const std::vector<std::array<double, 4>>& pts, bool exact, double h,
                             const Mat& delta) {
  WaveResiduals r;
  const Mat Lr = rev(w.L);
  for (const auto& x : pts) {
    const Mat psi = w.value(x) + delta;
    const auto g = exact ? w.gradient(x) : w.fd_gradient(x, h);
    const Mat d = dirac_op(g);
    r.dirac = std::max(r.dirac, cnorm(d * G12() + w.m * psi * G(0)));
    r.eigen = std::max(r.eigen, cnorm(d * G21() - w.P * psi));

    // Stream-line form in the rest frame, where psi^-1 v psi~^-1 = p/m literally.
    const auto xr = components(Lr * vec(x) * w.L);
    const Mat pr = w.rest_value(xr) + delta;
    const Mat v = pr * G(0) * rev(pr);
    const auto vu = components(v);
    Mat along;
    if (exact) {
      along = vu[0] * (-w.m) * (pr - delta) * G21();
    } else {
      auto a = xr, b = xr;
      for (int mu = 0; mu < 4; ++mu) {
        a[mu] += h * vu[mu];
        b[mu] -= h * vu[mu];
      }
      along = (w.rest_value(a) - w.rest_value(b)) / (2 * h);
    }
    const Mat res = along * G12() + w.m * pr.inverse() * v * rev(pr).inverse() * pr * G(0);
    r.stream = std::max(r.stream, cnorm(res));
  }
  return r;
}

// The same field handed to the library.
SpinorField library_field(const Wave& w) {
  SpinorField f;
  f.value = [w](const Multivector& x) { return even_part(oracle::unrep(w.value(x.vector_part()))); };
  f.gradient = [w](const Multivector& x) {
    const auto g = w.gradient(x.vector_part());
    std::array<Multivector, 4> out;
    for (int mu = 0; mu < 4; ++mu) out[mu] = even_part(oracle::unrep(g[mu]));
    return out;
  };
  return f;
}

Criterion linearization() {
  Criterion c{5, "linearization_chain", {}, {}};
  const double m = 1.0, h = 1e-4, tol = 1e-8;
  std::vector<std::array<double, 4>> pts;
  std::vector<Multivector> lib_pts;
  for (int i = 0; i < 12; ++i) {
    pts.push_back({0.37 * i - 1.1, std::sin(1.3 * i), 0.2 * i - 0.9, std::cos(0.7 * i)});
    lib_pts.push_back(Multivector::vector(pts.back()));
  }
  const Mat R0 = exp_plane(G(1) * G(3), 0.4) * exp_plane(G(2) * G(3), -0.25);
  struct Family {
    std::string tag;
    Mat L;
  };
  const std::vector<Family> families = {
      {"rest", I4()},
      {"boost_x_0.5", exp_plane(G(0) * G(1), 0.25)},
      {"boost_yz_1.0_rot",
       exp_plane((G(0) * G(2) + G(0) * G(3)) / std::sqrt(2.0), 0.5) * exp_plane(G(1) * G(2), 0.7)},
  };
  double neg = INFINITY;
  for (const auto& fam : families) {
    const Wave w = make_wave(fam.L, R0, m);
    double cube = 0;
    for (int mu = 0; mu < 4; ++mu) cube += std::pow(std::abs(w.p[mu]), 3);
    const double fd_tol = 2 * (h * h / 6) * cnorm(w.psi0) * cube;

    const WaveResiduals ex = wave_residuals(w, pts, true, h, Mat::Zero());
    const WaveResiduals fd = wave_residuals(w, pts, false, h, Mat::Zero());
    c.subs.push_back(upper("dirac_hestenes_exact_" + fam.tag, ex.dirac, tol));
    c.subs.push_back(upper("eigenfunction_exact_" + fam.tag, ex.eigen, tol));
    c.subs.push_back(upper("streamline_exact_" + fam.tag, ex.stream, tol));
    c.subs.push_back(upper("fd_max_" + fam.tag, std::max({fd.dirac, fd.eigen, fd.stream}), fd_tol));

    const Multivector p = Multivector::vector(w.p);
    const SpinorField f = library_field(w);
    const auto lex = linearization_check(p, m, f, lib_pts, {true, h}, tol);
    const auto lfd = linearization_check(p, m, f, lib_pts, {false, h}, fd_tol);
    c.subs.push_back(upper("library_exact_max_" + fam.tag,
                           std::max({lex.dirac.max, lex.eigen.max, lex.streamline.max}), tol));
    c.subs.push_back(upper("library_fd_max_" + fam.tag,
                           std::max({lfd.dirac.max, lfd.eigen.max, lfd.streamline.max}), fd_tol));

    // A constant offset leaves the derivatives alone but breaks every equation.
    const Mat delta = 1e-3 * G(1) * G(2);
    const WaveResiduals bad = wave_residuals(w, pts, true, h, delta);
    const auto lbad = linearization_check(p, m, offset(f, Multivector::blade(Blade::g12, 1e-3)), lib_pts, {true, h}, tol);
    neg = std::min({neg, bad.dirac / tol, bad.eigen / tol, lbad.eigen.max / tol, lbad.dirac.max / tol});
  }
  c.subs.push_back(band("perturbed_residual_over_tol_min", neg, 10.0, INFINITY));
  return c;
}

// ------------------------------------------------------------ 6

struct MeanVelocityOracle {
  double ab = 0, ac = 0, bc = 0;
};

MeanVelocityOracle mean_velocity_oracle(const Trajectory& t) {
  const double m = t.mass;
  const double T = kPi / m;
  std::array<double, 4> integral{};
  auto add = [&](const std::array<double, 4>& a, const std::array<double, 4>& b, double dt) {
    for (int mu = 0; mu < 4; ++mu) integral[mu] += 0.5 * (a[mu] + b[mu]) * dt;
  };
  std::size_t k = 0;
  while (k + 1 < t.samples.size() && t.samples[k + 1].tau <= T) {
    add(v_of(t.samples[k].psi.value()), v_of(t.samples[k + 1].psi.value()), t.h);
    ++k;
  }
  const double rest = T - t.samples[k].tau;
  if (rest > 0) {
    const auto a = v_of(t.samples[k].psi.value());
    const auto b = v_of(t.samples[k + 1].psi.value());
    std::array<double, 4> vT{};
    for (int mu = 0; mu < 4; ++mu) vT[mu] = a[mu] + (b[mu] - a[mu]) * rest / t.h;
    add(a, vT, rest);
  }
  std::array<double, 4> avg{}, pm{};
  const auto pu = t.samples.front().pi.vector_part();
  for (int mu = 0; mu < 4; ++mu) {
    avg[mu] = integral[mu] / T;
    pm[mu] = pu[mu] / m;
  }
  MeanVelocityOracle r;
  r.ab = max_abs4(avg, pm);
  for (const auto& s : t.samples) {
    const Mat psi = oracle::rep(s.psi.value());
    const Mat v = psi * G(0) * rev(psi);
    const auto cc = components(psi.inverse() * v * rev(psi).inverse());
    r.ac = std::max(r.ac, max_abs4(avg, cc));
    r.bc = std::max(r.bc, max_abs4(pm, cc));
  }
  return r;
}

Criterion mean_velocity_criterion(const std::vector<const Trajectory*>& runs) {
  Criterion c{6, "mean_velocity_identity", {}, {}};
  double ab = 0, ac = 0, bc = 0, lab = 0, lac = 0, lbc = 0;
  for (const Trajectory* t : runs) {
    const MeanVelocityOracle o = mean_velocity_oracle(*t);
    ab = std::max(ab, o.ab);
    ac = std::max(ac, o.ac);
    bc = std::max(bc, o.bc);
    const MeanVelocityReport l = mean_velocity_identity(*t, t->mass, 1e-6, 1);
    lab = std::max(lab, l.a_vs_b.max);
    lac = std::max(lac, l.a_vs_c.max);
    lbc = std::max(lbc, l.b_vs_c.max);
  }
  c.subs.push_back(upper("average_vs_p_over_m_oracle", ab, 1e-6));
  c.subs.push_back(upper("average_vs_psi_form_oracle", ac, 1e-6));
  c.subs.push_back(upper("p_over_m_vs_psi_form_oracle", bc, 1e-6));
  c.subs.push_back(upper("average_vs_p_over_m_library", lab, 1e-6));
  c.subs.push_back(upper("average_vs_psi_form_library", lac, 1e-6));
  c.subs.push_back(upper("p_over_m_vs_psi_form_library", lbc, 1e-6));
  return c;
}

// ------------------------------------------------------------ 7

// |<p v>_0 - m| and |<Omega S>_0 - m| for one spinor and its rate.
std::pair<double, double> spin_mass_at(const Mat& psi, const Mat& dpsi, const Mat& P, double m) {
  const Mat v = psi * G(0) * rev(psi);
  const Mat omega = 2.0 * grade2(dpsi * psi.inverse());
  const Mat S = 0.5 * psi * G21() * rev(psi);
  return {std::abs(scalar(P * v) - m), std::abs(scalar(omega * S) - m)};
}

Criterion spin_mass(const std::vector<const Trajectory*>& runs) {
  Criterion c{7, "spin_mass_identity", {}, {}};
  const Mat G012 = G(0) * G(1) * G(2);
  double pv = 0, os = 0, lib = 0;
  std::vector<double> taus;
  for (int k = 0; k <= 40; ++k) taus.push_back(0.17 * k);
  for (double m : {0.5, 1.0, 2.0}) {
    for (double w : {0.0, 0.5, 1.0}) {
      const Mat psi0 = std::sqrt(1.0 / std::cosh(w)) * exp_plane(G(0) * G(1), w / 2) * exp_plane(G(2) * G(3), 0.3);
      const Mat P = m * G(0);
      for (double tau : taus) {
        // psi = cos(m tau) psi0 + sin(m tau) p psi0 g012 / m
        const Mat psi = std::cos(m * tau) * psi0 + std::sin(m * tau) / m * P * psi0 * G012;
        const Mat dpsi = -m * std::sin(m * tau) * psi0 + std::cos(m * tau) * P * psi0 * G012;
        const auto [a, b] = spin_mass_at(psi, dpsi, P, m);
        pv = std::max(pv, a);
        os = std::max(os, b);
      }
      const SpinMassReport r = spin_mass_identity(DHSpinor(even_part(oracle::unrep(psi0))), gamma(0) * m, m, taus, 1e-12);
      lib = std::max({lib, r.pv.max, r.omega_s.max});
    }
  }
  c.subs.push_back(upper("closed_form_pv_oracle", pv, 1e-12));
  c.subs.push_back(upper("closed_form_omega_s_oracle", os, 1e-12));
  c.subs.push_back(upper("closed_form_library", lib, 1e-12));

  double ipv = 0, ios = 0, ilib = 0;
  for (const Trajectory* t : runs) {
    for (std::size_t k = 0; k < t->samples.size(); k += 7) {
      const BZState& s = t->samples[k];
      const Mat psi = oracle::rep(s.psi.value());
      const Mat P = vec(s.pi);
      const Mat dpsi = P * psi * G012;  // psi' = pi psi g0 g1 g2
      const auto [a, b] = spin_mass_at(psi, dpsi, P, t->mass);
      ipv = std::max(ipv, a);
      ios = std::max(ios, b);
    }
    const SpinMassReport r = spin_mass_identity(*t, t->mass, 1e-6);
    ilib = std::max({ilib, r.pv.max, r.omega_s.max});
  }
  c.subs.push_back(upper("integrated_pv_oracle", ipv, 1e-6));
  c.subs.push_back(upper("integrated_omega_s_oracle", ios, 1e-6));
  c.subs.push_back(upper("integrated_library", ilib, 1e-6));
  return c;
}

// ------------------------------------------------------------ 8

Criterion lightlike() {
  Criterion c{8, "lightlike_kinematics", {}, {}};
  double null = 0, space = 0, radius = 0, frame = 0, path = 0;
  for (double m : {0.5, 1.0, 2.0}) {
    const Multivector zeta0 = Multivector::vector(0.2, -0.1, 0.3, 0.05);
    for (int k = 0; k <= 100; ++k) {
      const double tau = 0.061 * k;
      const HelixPoint a = lightlike_helix(m, zeta0, tau, HelixVariant::lightlike);
      const HelixPoint b = lightlike_helix(m, zeta0, tau, HelixVariant::spacelike);
      const Mat ua = vec(a.u), ub = vec(b.u), r = vec(a.radius);
      null = std::max(null, std::abs(mdot(ua, ua)));
      space = std::max(space, std::abs(mdot(ub, ub) + 1));
      radius = std::max(radius, std::abs(std::sqrt(-mdot(r, r)) - 1 / (2 * m)));

      // Own frame of R = exp(-g21 m tau) and own path.
      const Mat R = exp_plane(-G21(), m * tau);
      const Mat e0 = R * G(0) * rev(R), e2 = R * G(2) * rev(R);
      frame = std::max(frame, cnorm(ua - (e0 - e2)));
      const double s = std::sin(2 * m * tau), cc = std::cos(2 * m * tau);
      // zeta = zeta0 + g0 tau - integral of e2 = g2 cos 2m - g1 sin 2m
      const Mat own = vec(zeta0) + tau * G(0) - (s * G(2) + (cc - 1) * G(1)) / (2 * m);
      path = std::max(path, cnorm(vec(a.zeta) - own));
    }
  }
  c.subs.push_back(upper("lightlike_u_dot_u", null, 1e-12));
  c.subs.push_back(upper("spacelike_u_dot_u_plus_1", space, 1e-12));
  c.subs.push_back(upper("radius_minus_half_compton", radius, 1e-9));
  c.subs.push_back(upper("u_vs_oracle_frame", frame, 1e-12));
  c.subs.push_back(upper("zeta_vs_oracle_path", path, 1e-12));
  return c;
}

// ------------------------------------------------------------ 9

struct OwnFrames {
  std::vector<std::array<Mat, 4>> e;  // frames at samples first..first+n-1
  std::size_t first = 2;
};

Mat unit(const Mat& a) { return a / std::sqrt(std::abs(mdot(a, a))); }

// Gram-Schmidt along the world-line: e0 = v/|v|, edot_0 = K1 e^1,
// e2 from the part of edot_1 off (e0, e1), e3 closing e0 e1 e2 e3 = g0123.
OwnFrames own_frames(const Trajectory& t) {
  const std::size_t n = t.samples.size();
  const double h = t.h;
  std::vector<Mat> e0(n), e1(n);
  for (std::size_t k = 0; k < n; ++k) e0[k] = unit(vec(v_of(t.samples[k].psi.value())));
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Mat d = (e0[k + 1] - e0[k - 1]) / (2 * h);
    e1[k] = -unit(d);
  }
  const Mat I = G(0) * G(1) * G(2) * G(3);
  OwnFrames f;
  for (std::size_t k = 2; k + 2 < n; ++k) {
    const Mat d1 = (e1[k + 1] - e1[k - 1]) / (2 * h);
    const Mat w = d1 - mdot(d1, e0[k]) * e0[k] + mdot(d1, e1[k]) * e1[k];
    const Mat e2 = -unit(w);
    // e0 e1 e2 e3 = I  =>  e3 = -(e0 e1 e2) I  for e3^2 = -1
    const Mat e3 = -(e0[k] * e1[k] * e2) * I;
    f.e.push_back({e0[k], e1[k], e2, e3});
  }
  return f;
}

struct FrenetOracle {
  double spread = 0, omega = 0, invariant = 0, darboux = 0;
  std::array<double, 3> mean{};
};

Mat recip(const std::array<Mat, 4>& e, int mu) { return oracle::eta[mu] * e[mu]; }

FrenetOracle frenet_oracle(const Trajectory& t) {
  const OwnFrames f = own_frames(t);
  const double h = t.h;
  std::vector<std::array<double, 3>> K;
  FrenetOracle out;
  for (std::size_t k = 1; k + 1 < f.e.size(); ++k) {
    std::array<Mat, 4> d;
    for (int mu = 0; mu < 4; ++mu) d[mu] = (f.e[k + 1][mu] - f.e[k - 1][mu]) / (2 * h);
    const auto& e = f.e[k];
    const std::array<double, 3> Kk = {mdot(d[0], e[1]), mdot(d[1], e[2]), mdot(d[2], e[3])};
    K.push_back(Kk);
    // Omega = (1/2) sum edot_mu ^ e^mu
    Mat om = Mat::Zero();
    for (int mu = 0; mu < 4; ++mu) om += 0.25 * (d[mu] * recip(e, mu) - recip(e, mu) * d[mu]);
    const Mat from_K = Kk[0] * recip(e, 1) * recip(e, 0) + Kk[1] * recip(e, 2) * recip(e, 1) +
                       Kk[2] * recip(e, 3) * recip(e, 2);
    out.omega = std::max(out.omega, cnorm(om - from_K));
    out.invariant =
        std::max(out.invariant, std::abs(Kk[0] * Kk[0] - Kk[1] * Kk[1] - Kk[2] * Kk[2] - scalar(om * om)));
    // edot_mu = Omega . e_mu
    for (int mu = 0; mu < 4; ++mu) {
      out.darboux = std::max(out.darboux, cnorm(d[mu] - 0.5 * (om * e[mu] - e[mu] * om)));
    }
  }
  std::array<double, 3> sd{};
  for (int i = 0; i < 3; ++i) {
    double s = 0, s2 = 0;
    for (const auto& x : K) s += x[i];
    out.mean[i] = s / static_cast<double>(K.size());
    for (const auto& x : K) s2 += (x[i] - out.mean[i]) * (x[i] - out.mean[i]);
    sd[i] = std::sqrt(s2 / static_cast<double>(K.size()));
  }
  const double scale = std::max({std::abs(out.mean[0]), std::abs(out.mean[1]), std::abs(out.mean[2])});
  out.spread = std::max({sd[0], sd[1], sd[2]}) / scale;
  return out;
}

FrenetOracle frenet_library(const Trajectory& t) {
  std::vector<Multivector> v;
  for (const auto& d : t.diagnostics) v.push_back(d.v);
  const FrenetTrack track = frenet_frames_from_velocity(v, 0.0, t.h);
  const Curvatures K = curvatures_from_frame(track.frames, t.h);
  const auto d = frame_derivatives(track.frames, t.h);
  FrenetOracle out;
  std::array<double, 3> sd{};
  const std::array<const std::vector<double>*, 3> ks = {&K.K1, &K.K2, &K.K3};
  for (int i = 0; i < 3; ++i) {
    double s = 0, s2 = 0;
    for (double x : *ks[i]) s += x;
    out.mean[i] = s / static_cast<double>(ks[i]->size());
    for (double x : *ks[i]) s2 += (x - out.mean[i]) * (x - out.mean[i]);
    sd[i] = std::sqrt(s2 / static_cast<double>(ks[i]->size()));
  }
  out.spread = std::max({sd[0], sd[1], sd[2]}) /
               std::max({std::abs(out.mean[0]), std::abs(out.mean[1]), std::abs(out.mean[2])});
  for (std::size_t k = 0; k < track.frames.size(); ++k) {
    const Multivector o = darboux_bivector(d[k], track.frames[k]);
    out.omega = std::max(out.omega, norm(o - darboux_from_curvatures(K.K1[k], K.K2[k], K.K3[k], track.frames[k])));
    out.invariant =
        std::max(out.invariant, std::abs(darboux_invariant(K.K1[k], K.K2[k], K.K3[k]) - scalar_part(o * o)));
  }
  for (const auto& r : darboux_relation_residual(track.frames, t.h)) {
    for (double x : r) out.darboux = std::max(out.darboux, x);
  }
  return out;
}

Criterion frenet() {
  Criterion c{9, "frenet_darboux", {}, {}};
  for (double w : {0.5, 1.0}) {
    const Trajectory t = simulate(circular(1.0, w, 1e-3, 2 * kPi));
    const std::string tag = w == 0.5 ? "_w0.5" : "_w1.0";
    const FrenetOracle o = frenet_oracle(t);
    const FrenetOracle l = frenet_library(t);
    c.subs.push_back(upper("curvature_spread_oracle" + tag, o.spread, 1e-4));
    c.subs.push_back(upper("curvature_spread_library" + tag, l.spread, 1e-4));
    c.subs.push_back(upper("omega_match_oracle" + tag, o.omega, 1e-6));
    c.subs.push_back(upper("omega_match_library" + tag, l.omega, 1e-6));
    c.subs.push_back(upper("invariant_match_oracle" + tag, o.invariant, 1e-6));
    c.subs.push_back(upper("invariant_match_library" + tag, l.invariant, 1e-6));
    // K1 = 2m sinh w, K2 = 2m cosh w up to the O(h^2 K^3) difference bias.
    const double K2 = 2 * std::cosh(w);
    const double bias = 0.5 * t.h * t.h * K2 * K2 * K2;
    c.subs.push_back(upper("K1_vs_exact" + tag, std::abs(o.mean[0] - 2 * std::sinh(w)), bias));
    c.subs.push_back(upper("K2_vs_exact" + tag, std::abs(std::abs(o.mean[1]) - K2), bias));
  }
  // Second order: the generic helix is elliptical, so the residual is not
  // already at roundoff there.
  const auto residuals = [](double h) {
    const Trajectory t = simulate(generic(1.0, h, 2.0));
    return std::pair{frenet_oracle(t).darboux, frenet_library(t).darboux};
  };
  const auto coarse = residuals(2e-3);
  const auto fine = residuals(1e-3);
  c.subs.push_back(band("darboux_halving_ratio_oracle", coarse.first / fine.first, 3.0, 5.0));
  c.subs.push_back(band("darboux_halving_ratio_library", coarse.second / fine.second, 3.0, 5.0));
  return c;
}

// ------------------------------------------------------------ 10

Criterion trivial() {
  Criterion c{10, "trivial_solution", {}, {}};
  double res = 0, value = 0, vel = 0;
  for (double m : {0.5, 1.0, 2.0}) {
    for (int k = 0; k <= 200; ++k) {
      const double tau = 0.037 * k;
      const Mat psi = oracle::rep(trivial_solution(m, tau).value());
      // cos m tau - g21 sin m tau, and its derivative
      const Mat own = std::cos(m * tau) * I4() - std::sin(m * tau) * G21();
      const Mat dpsi = -m * std::sin(m * tau) * I4() - m * std::cos(m * tau) * G21();
      value = std::max(value, cnorm(psi - own));
      res = std::max(res, cnorm(dpsi * G12() + m * G(0) * psi * G(0)));
      vel = std::max(vel, cnorm(psi * G(0) * rev(psi) - G(0)));
    }
  }
  c.subs.push_back(upper("closed_form_vs_oracle", value, 1e-14));
  c.subs.push_back(upper("equation_residual", res, 1e-12));
  c.subs.push_back(upper("velocity_minus_g0_closed_form", vel, 1e-12));

  // Integrated from psi = 1.
  ScenarioConfig cfg;
  cfg.m = 1.0;
  cfg.step = 1e-3;
  cfg.tau_end = 2 * kPi;
  const Trajectory t = simulate(cfg);
  double ivel = 0;
  for (const auto& s : t.samples) ivel = std::max(ivel, max_abs4(v_of(s.psi.value()), {1, 0, 0, 0}));
  c.subs.push_back(upper("velocity_minus_g0_integrated", ivel, 1e-12));
  return c;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void print(const Criterion& c) {
  // Headline: the sub-check closest to (or furthest past) its limit.
  const Sub* worst = nullptr;
  double worst_margin = -INFINITY;
  for (const auto& s : c.subs) {
    double margin;
    if (!s.pass()) {
      margin = INFINITY;
    } else if (std::isfinite(s.hi) && s.hi > 0) {
      margin = s.value / s.hi;
    } else {
      margin = 0;
    }
    if (margin > worst_margin) {
      worst_margin = margin;
      worst = &s;
    }
  }
  std::string head = c.pass() ? "PASS" : "FAIL";
  std::printf("%s %d %s", head.c_str(), c.id, c.name.c_str());
  if (!c.error.empty()) {
    std::printf(" error=\"%s\"\n", c.error.c_str());
  } else if (worst) {
    std::printf(" value=%s tol=%s (%s, %.2fs)\n", fmt(worst->value).c_str(),
                std::isfinite(worst->hi) ? fmt(worst->hi).c_str() : (">=" + fmt(worst->lo)).c_str(),
                worst->name.c_str(), c.seconds);
  } else {
    std::printf(" no checks ran\n");
  }
  for (const auto& s : c.subs) {
    std::string range;
    if (std::isfinite(s.lo) && std::isfinite(s.hi)) {
      range = "[" + fmt(s.lo) + ", " + fmt(s.hi) + "]";
    } else if (std::isfinite(s.hi)) {
      range = "<= " + fmt(s.hi);
    } else {
      range = ">= " + fmt(s.lo);
    }
    std::printf("    %-4s %-40s %s %s\n", s.pass() ? "ok" : "BAD", s.name.c_str(), fmt(s.value).c_str(), range.c_str());
  }
}

}  // namespace

int main() {
  // The shared generic run (m = 1, h = 1e-3, tau in [0, 10 pi]).
  std::optional<Trajectory> run, helix;
  auto guarded = [&](int id, const std::string& name, const std::function<Criterion()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c{id, name, {}, {}};
    try {
      c = f();
    } catch (const std::exception& e) {
      c.error = e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    print(c);
    std::fflush(stdout);
    return c.pass();
  };
  auto base = [&]() -> const Trajectory& {
    if (!run) run = simulate(generic(1.0, 1e-3, 10 * kPi));
    return *run;
  };
  auto circ = [&]() -> const Trajectory& {
    if (!helix) helix = simulate(circular(1.0, 0.5, 1e-3, 2 * kPi));
    return *helix;
  };

  bool ok = true;
  ok &= guarded(1, "algebra_oracle", algebra);
  ok &= guarded(2, "free_solution_reproduction", [&] { return free_solution(base()); });
  ok &= guarded(3, "conservation", [&] { return conservation(base()); });
  ok &= guarded(4, "zbw_frequency", zbw_frequency);
  ok &= guarded(5, "linearization_chain", linearization);
  ok &= guarded(6, "mean_velocity_identity", [&] { return mean_velocity_criterion({&base(), &circ()}); });
  ok &= guarded(7, "spin_mass_identity", [&] { return spin_mass({&base(), &circ()}); });
  ok &= guarded(8, "lightlike_kinematics", lightlike);
  ok &= guarded(9, "frenet_darboux", frenet);
  ok &= guarded(10, "trivial_solution", trivial);
  std::printf("%s\n", ok ? "ALL PASS" : "SOME CRITERIA FAILED");
  return ok ? 0 : 1;
}
