#include "zbw/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "zbw/errors.hpp"
#include "zbw/matrix_rep.hpp"

namespace zbw {
namespace {

const Multivector kG012 = gamma(0) * gamma(1) * gamma(2);
const Multivector kG21 = gamma(2) * gamma(1);

double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

bool finite_state(const BZState& s) {
  return is_finite(s.x) && is_finite(s.pi) && is_finite(s.psi.value());
}

// Kahan update of sum += inc, carrying the lost low-order bits in carry.
void compensated_add(Multivector& sum, Multivector& carry, const Multivector& inc) {
  for (std::size_t i = 0; i < kBladeCount; ++i) {
    const double y = inc[i] - carry[i];
    const double t = sum[i] + y;
    carry[i] = (t - sum[i]) - y;
    sum[i] = t;
  }
}

}  // namespace

EMField EMField::free() { return EMField{}; }

EMField EMField::constant(const Multivector& F, double charge) {
  if (grade_leakage(F, 2) > 1e-12) throw GradeError("EMField: F must be a bivector");
  EMField f;
  f.source_ = Constant{grade_projection(F, 2)};
  f.charge_ = charge;
  return f;
}

EMField EMField::polynomial(std::vector<PolynomialTerm> terms, double charge) {
  for (const auto& t : terms) {
    if (t.component < 0 || t.component > 3) throw ConfigError("EMField: polynomial component must be 0..3");
    for (int p : t.powers) {
      if (p < 0) throw ConfigError("EMField: polynomial powers must be non-negative");
    }
  }
  EMField f;
  f.source_ = Polynomial{std::move(terms)};
  f.charge_ = charge;
  return f;
}

Multivector EMField::potential(const Multivector& x) const {
  if (const auto* c = std::get_if<Constant>(&source_)) {
    return grade_projection(inner(x, c->F), 1) * 0.5;
  }
  if (const auto* p = std::get_if<Polynomial>(&source_)) {
    std::array<double, 4> A{};
    for (const auto& t : p->terms) {
      double v = t.coefficient;
      for (int mu = 0; mu < 4; ++mu) v *= ipow(x[1 + mu], t.powers[mu]);
      A[t.component] += v;
    }
    return Multivector::vector(A);
  }
  return Multivector{};
}

Multivector EMField::field_strength(const Multivector& x) const {
  if (const auto* c = std::get_if<Constant>(&source_)) return c->F;
  if (const auto* p = std::get_if<Polynomial>(&source_)) {
    // F = gamma^nu ^ d_nu A with gamma^nu = eta^{nu nu} gamma_nu.
    Multivector F;
    for (int nu = 0; nu < 4; ++nu) {
      std::array<double, 4> dA{};
      for (const auto& t : p->terms) {
        const int k = t.powers[nu];
        if (k == 0) continue;
        double v = t.coefficient * k;
        for (int mu = 0; mu < 4; ++mu) v *= ipow(x[1 + mu], mu == nu ? k - 1 : t.powers[mu]);
        dA[t.component] += v;
      }
      F += wedge(gamma(nu) * kMetric[nu], Multivector::vector(dA));
    }
    return F;
  }
  return Multivector{};
}

StateRate eom_derivatives(const BZState& s, const EMField& field) {
  const Multivector& psi = s.psi.value();
  StateRate r;
  r.dx = velocity_bilinear(s.psi);
  // psi' g1 g2 = -pi psi g0  =>  psi' = pi psi g0 g1 g2, since (g1 g2)^-1 = -g1 g2.
  r.dpsi = even_part(s.pi * psi * kG012);
  if (!field.is_free()) {
    r.dpi = grade_projection(inner(field.field_strength(s.x), r.dx), 1) * field.charge();
  }
  return r;
}

StateRate rk4_increment(const BZState& s, const EMField& field, double h) {
  const auto shifted = [&](const StateRate& k, double c) {
    BZState t;
    t.tau = s.tau + c;
    t.x = s.x + k.dx * c;
    t.pi = s.pi + k.dpi * c;
    t.psi = DHSpinor(s.psi.value() + k.dpsi * c);
    return t;
  };
  const StateRate k1 = eom_derivatives(s, field);
  const StateRate k2 = eom_derivatives(shifted(k1, h / 2), field);
  const StateRate k3 = eom_derivatives(shifted(k2, h / 2), field);
  const StateRate k4 = eom_derivatives(shifted(k3, h), field);

  const double w = h / 6.0;
  StateRate inc;
  inc.dx = (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx) * w;
  inc.dpi = (k1.dpi + 2.0 * k2.dpi + 2.0 * k3.dpi + k4.dpi) * w;
  inc.dpsi = (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi) * w;
  return inc;
}

BZState step_rk4(const BZState& s, const EMField& field, double h) {
  const StateRate inc = rk4_increment(s, field, h);
  BZState out;
  out.tau = s.tau + h;
  out.x = s.x + inc.dx;
  out.pi = s.pi + inc.dpi;
  out.psi = DHSpinor(s.psi.value() + inc.dpsi);
  if (!finite_state(out)) {
    throw NumericalOverflowError("step_rk4: non-finite state", s.tau);
  }
  return out;
}

Conserved conserved_quantities(const BZState& s, const EMField& field) {
  const Multivector v = velocity_bilinear(s.psi);
  const Multivector p = s.pi + field.potential(s.x) * field.charge();
  Conserved c;
  c.H = dot(s.pi, v);
  c.p2 = dot(p, p);
  const Tensor4 S = spin_tensor(spin_density_bivector(s.psi));
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const double xm = kMetric[mu] * s.x[1 + mu];
      const double xn = kMetric[nu] * s.x[1 + nu];
      const double pm = kMetric[mu] * s.pi[1 + mu];
      const double pn = kMetric[nu] * s.pi[1 + nu];
      c.J[mu][nu] = xm * pn - xn * pm + S[mu][nu];
    }
  }
  const Multivector& psi = s.psi.value();
  c.zbarz = scalar_part(psi * reversion(psi));
  return c;
}

Diagnostics diagnose(const BZState& s, const EMField& field) {
  const Conserved c = conserved_quantities(s, field);
  Diagnostics d;
  d.H = c.H;
  d.p2 = c.p2;
  d.J = c.J;
  d.zbarz = c.zbarz;
  d.v = velocity_bilinear(s.psi);
  d.S = spin_density_bivector(s.psi);
  const Multivector& psi = s.psi.value();
  const Multivector q = psi * reversion(psi);
  d.rho = std::hypot(q[Blade::scalar], q[Blade::g0123]);
  d.beta = std::atan2(q[Blade::g0123], q[Blade::scalar]);
  if (d.beta <= -std::numbers::pi) d.beta = std::numbers::pi;
  return d;
}

void ScenarioConfig::validate() const {
  if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("m: mass must be positive");
  if (!std::isfinite(e)) throw ConfigError("e: charge must be finite");
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("step: must be positive");
  if (!(tau_end >= 0.0) || !std::isfinite(tau_end)) throw ConfigError("tau_end: must be non-negative");
  if (stride == 0) throw ConfigError("outputs.stride: must be at least 1");
  if (init.kind == InitialCondition::Kind::rotor) {
    if (!(init.rho > 0.0)) throw ConfigError("init.values.rho: must be positive");
    if (!is_rotor(init.rotor, 1e-9)) throw ConfigError("init.values.rotor: R reverse(R) != 1");
  }
  if (field.kind == FieldKind::constant && grade_leakage(field.F, 2) > 1e-12) {
    throw ConfigError("field.params.F: must be a bivector");
  }
}

EMField ScenarioConfig::make_field() const {
  switch (field.kind) {
    case FieldKind::constant:
      return EMField::constant(field.F, e);
    case FieldKind::polynomial:
      return EMField::polynomial(field.terms, e);
    case FieldKind::free:
      break;
  }
  return EMField::free();
}

BZState ScenarioConfig::initial_state() const {
  BZState s;
  s.tau = 0.0;
  s.x = init.x;
  s.pi = init.has_pi ? init.pi : gamma(0) * m;
  s.psi = init.kind == InitialCondition::Kind::z ? z_to_psi(init.z)
                                                 : compose_spinor(init.rho, init.beta, init.rotor);
  if (init.normalize_energy) {
    const double H = dot(s.pi, velocity_bilinear(s.psi));
    if (!(H > 0.0)) throw ConfigError("init.normalize: H(0) must be positive to rescale to H = m");
    s.psi = DHSpinor(s.psi.value() * std::sqrt(m / H));
  }
  return s;
}

ScenarioConfig default_scenario(double m) {
  ScenarioConfig cfg;
  cfg.name = "free_helix";
  cfg.m = m;
  cfg.init.kind = InitialCondition::Kind::z;
  cfg.init.z.z = {std::complex<double>(0.6, 0.1), std::complex<double>(-0.3, 0.4),
                  std::complex<double>(0.2, -0.25), std::complex<double>(0.35, 0.15)};
  cfg.init.normalize_energy = true;
  cfg.step = 1e-3 / m;
  cfg.tau_end = 10.0 * std::numbers::pi / m;
  return cfg;
}

Trajectory simulate(const ScenarioConfig& cfg) {
  SimulationResult r = simulate_partial(cfg);
  if (r.failed) throw NumericalOverflowError(r.failure, r.failure_tau);
  return std::move(r.trajectory);
}

SimulationResult simulate_partial(const ScenarioConfig& cfg) {
  cfg.validate();
  SimulationResult result;
  Trajectory& traj = result.trajectory;
  traj.field = cfg.make_field();
  traj.mass = cfg.m;
  traj.h = cfg.step * static_cast<double>(cfg.stride);

  const double h = cfg.step;
  const auto n = static_cast<long long>(std::floor(cfg.tau_end / h * (1.0 + 1e-9)));
  BZState s = cfg.initial_state();
  traj.samples.reserve(static_cast<std::size_t>(n) / cfg.stride + 1);
  traj.samples.push_back(s);
  traj.diagnostics.push_back(diagnose(s, traj.field));
  Multivector x = s.x;
  Multivector pi = s.pi;
  Multivector psi = s.psi.value();
  Multivector cx, cpi, cpsi;
  for (long long k = 1; k <= n; ++k) {
    const StateRate inc = rk4_increment(s, traj.field, h);
    compensated_add(x, cx, inc.dx);
    compensated_add(pi, cpi, inc.dpi);
    compensated_add(psi, cpsi, inc.dpsi);
    s.tau = static_cast<double>(k) * h;
    s.x = x;
    s.pi = pi;
    s.psi = DHSpinor(psi);
    if (!finite_state(s)) {
      result.failed = true;
      result.failure_tau = s.tau;
      result.failure = "simulate: non-finite state";
      return result;
    }
    if (static_cast<std::size_t>(k) % cfg.stride == 0) {
      traj.samples.push_back(s);
      traj.diagnostics.push_back(diagnose(s, traj.field));
    }
  }
  return result;
}

DiracSpinorZ analytic_free_z(const DiracSpinorZ& z0, const Multivector& p, double m, double tau) {
  if (std::abs(dot(p, p) - m * m) > 1e-9 * std::max(1.0, m * m)) {
    throw MassShellError("analytic_free_z: p^2 != m^2");
  }
  // matrix_rep(p) = p^mu gamma_mu = gamma^mu p_mu
  const MatrixRep P = matrix_rep(grade_projection(p, 1));
  const std::complex<double> i(0.0, 1.0);
  const MatrixRep U = std::cos(m * tau) * MatrixRep::Identity() - i * (std::sin(m * tau) / m) * P;
  Eigen::Vector4cd z;
  for (int r = 0; r < 4; ++r) z(r) = z0.z[r];
  const Eigen::Vector4cd zt = U * z;
  DiracSpinorZ out;
  for (int r = 0; r < 4; ++r) out.z[r] = zt(r);
  return out;
}

Multivector analytic_free_velocity(const Multivector& v0, const Multivector& a0,
                                   const Multivector& p, double m, double H, double tau) {
  const Multivector drift = p * (H / (m * m));
  return drift + (v0 - drift) * std::cos(2.0 * m * tau) + a0 * (std::sin(2.0 * m * tau) / (2.0 * m));
}

DHSpinor free_spinor(const DHSpinor& psi0, const Multivector& p, double m, double tau) {
  const Multivector& q = psi0.value();
  return DHSpinor(q * std::cos(m * tau) + p * q * kG012 * (std::sin(m * tau) / m));
}

DHSpinor free_spinor_rate(const DHSpinor& psi0, const Multivector& p, double m, double tau) {
  const Multivector& q = psi0.value();
  return DHSpinor(q * (-m * std::sin(m * tau)) + p * q * kG012 * std::cos(m * tau));
}

DHSpinor trivial_solution(double m, double tau) {
  return trivial_solution(DHSpinor(Multivector::scalar(1.0)), m, tau);
}

DHSpinor trivial_solution(const DHSpinor& psi0, double m, double tau) {
  // (g2 g1)^2 = -1, so exp(-g2 g1 m tau) = cos(m tau) - g2 g1 sin(m tau).
  const Multivector R = Multivector::scalar(std::cos(m * tau)) - kG21 * std::sin(m * tau);
  return DHSpinor(psi0.value() * R);
}

HelixPoint lightlike_helix(double m, const Multivector& zeta0, double tau, HelixVariant variant) {
  const double omega = 2.0 * m;
  const auto frame_vector = [&](int mu, double t) {
    const Multivector R = trivial_solution(m, t).value();
    return grade_projection(R * gamma(mu) * reversion(R), 1);
  };
  const Multivector e0 = frame_vector(0, tau);
  const Multivector e1 = frame_vector(1, tau);
  const Multivector e2 = frame_vector(2, tau);
  const Multivector e1_0 = frame_vector(1, 0.0);
  const Multivector e2_0 = frame_vector(2, 0.0);

  // With e1' = omega e2 and e2' = -omega e1 the primitives are
  // int -e2 = -e1/omega and int -e1 = e2/omega.
  HelixPoint out;
  if (variant == HelixVariant::lightlike) {
    out.u = e0 - e2;
    out.radius = -e1 / omega;
    out.zeta = zeta0 + gamma(0) * tau + out.radius + e1_0 / omega;
  } else {
    out.u = e0 - e1 - e2;
    out.radius = (e2 - e1) / omega;
    out.zeta = zeta0 + gamma(0) * tau + out.radius - (e2_0 - e1_0) / omega;
  }
  return out;
}

Multivector mean_velocity(const Trajectory& traj, double m, int periods_wanted) {
  const auto& s = traj.samples;
  const double period = std::numbers::pi / m;
  if (s.size() < 2) throw InsufficientDataError("mean_velocity: need at least two samples");
  const double t0 = s.front().tau;
  const double span = s.back().tau - t0;
  const auto fit = static_cast<long long>(std::floor(span / period * (1.0 + 1e-12)));
  const long long periods = periods_wanted > 0 ? periods_wanted : fit;
  if (fit < 1 || periods > fit) {
    throw InsufficientDataError("mean_velocity: run is shorter than the requested number of zbw periods");
  }

  const double h = traj.h;
  const double b = t0 + static_cast<double>(periods) * period;
  Multivector integral;
  std::size_t k = 0;
  Multivector vk = velocity_bilinear(s[0].psi);
  while (k + 1 < s.size() && s[k + 1].tau <= b) {
    const Multivector vn = velocity_bilinear(s[k + 1].psi);
    integral += (vk + vn) * (h / 2);
    vk = vn;
    ++k;
  }
  const double delta = b - s[k].tau;
  if (delta > 0.0 && k + 1 < s.size()) {
    const Multivector vn = velocity_bilinear(s[k + 1].psi);
    const Multivector vb = vk + (vn - vk) * (delta / h);
    integral += (vk + vb) * (delta / 2);
  }
  return grade_projection(integral / (static_cast<double>(periods) * period), 1);
}

double measure_zbw_frequency(const Trajectory& traj, int component) {
  if (component < 0 || component > 3) throw std::invalid_argument("measure_zbw_frequency: component must be 0..3");
  const auto& s = traj.samples;
  std::vector<double> f(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) f[k] = velocity_bilinear(s[k].psi)[1 + component];
  if (f.size() < 3) throw InsufficientDataError("measure_zbw_frequency: too few samples");
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  const double level = 0.5 * (*lo + *hi);

  std::vector<double> crossings;
  for (std::size_t k = 0; k + 1 < f.size(); ++k) {
    const double a = f[k] - level;
    const double b = f[k + 1] - level;
    if ((a < 0.0 && b >= 0.0) || (a >= 0.0 && b < 0.0)) {
      crossings.push_back(s[k].tau + traj.h * a / (a - b));
    }
  }
  if (crossings.size() < 3) {
    throw InsufficientDataError("measure_zbw_frequency: fewer than three level crossings");
  }
  // Consecutive crossings are half a period apart.
  const double span = crossings.back() - crossings.front();
  return std::numbers::pi * static_cast<double>(crossings.size() - 1) / span;
}

}  // namespace zbw
