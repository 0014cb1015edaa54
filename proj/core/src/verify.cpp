#include "zbw/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "zbw/errors.hpp"
#include "zbw/frenet.hpp"
#include "zbw/spinor.hpp"

namespace zbw {
namespace {

const Multivector kG12 = gamma(1) * gamma(2);
const Multivector kG21 = gamma(2) * gamma(1);

void require_on_shell(const Multivector& p, double m, const char* who) {
  if (std::abs(dot(p, p) - m * m) > 1e-9 * std::max(1.0, m * m)) {
    throw MassShellError(std::string(who) + ": p^2 != m^2");
  }
}

std::array<Multivector, 4> gradient_at(const SpinorField& f, const Multivector& x,
                                       const DerivativeOptions& opt) {
  if (opt.closed_form) {
    if (!f.gradient) throw std::invalid_argument("closed-form derivatives requested for a field without a gradient");
    return f.gradient(x);
  }
  const double h = opt.spacing;
  std::array<Multivector, 4> g;
  for (int mu = 0; mu < 4; ++mu) {
    const Multivector step = gamma(mu) * h;
    g[mu] = (f.value(x + step) - f.value(x - step)) / (2.0 * h);
  }
  return g;
}

// d psi = gamma^mu d_mu psi
Multivector dirac_operator(const std::array<Multivector, 4>& grad) {
  Multivector r;
  for (int mu = 0; mu < 4; ++mu) r += gamma(mu) * kMetric[mu] * grad[mu];
  return r;
}

Multivector checked_value(const SpinorField& f, const Multivector& x) {
  const Multivector v = f.value(x);
  if (!is_finite(v)) throw Error("spinor field is not finite at a sample point");
  return v;
}

Multivector inverse_at(const Multivector& psi, double tau) {
  try {
    return inverse(psi);
  } catch (const SingularityError&) {
    throw SingularSpinorError("psi is not invertible at tau = " + std::to_string(tau), tau);
  }
}

// psi' g1 g2 + m (psi^-1 v psi~^-1) psi g0 for one sample already in the rest frame of p.
double streamline_residual(const Multivector& psi, const Multivector& dpsi, double m, double tau) {
  const Multivector v = grade_projection(psi * gamma(0) * reversion(psi), 1);
  const Multivector inv = inverse_at(psi, tau);
  const Multivector w = inv * v * reversion(inv);
  return norm(dpsi * kG12 + w * psi * gamma(0) * m);
}

std::vector<double> indices(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = static_cast<double>(k);
  return out;
}

Multivector free_momentum(const Trajectory& traj) {
  const BZState& s0 = traj.samples.front();
  return s0.pi + traj.field.potential(s0.x) * traj.field.charge();
}

}  // namespace

ResidualReport make_report(std::string equation, std::vector<double> points,
                           std::vector<double> residuals, double tolerance) {
  ResidualReport r;
  r.equation = std::move(equation);
  r.points = std::move(points);
  r.residuals = std::move(residuals);
  r.tolerance = tolerance;
  double sum = 0.0;
  bool finite = true;
  for (double x : r.residuals) {
    finite = finite && std::isfinite(x);
    r.max = std::max(r.max, x);
    sum += x * x;
  }
  r.rms = r.residuals.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(r.residuals.size()));
  r.pass = finite && r.max <= tolerance;
  return r;
}

double calibrate_fd_coefficient(double m, double h) {
  const auto n = static_cast<std::size_t>(std::ceil(std::numbers::pi / m / h)) + 1;
  std::vector<double> taus(n);
  std::vector<DHSpinor> psi(n);
  std::vector<Multivector> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    taus[k] = static_cast<double>(k) * h;
    psi[k] = trivial_solution(m, taus[k]);
    values[k] = psi[k].value();
  }
  const auto dpsi = finite_difference(values, h);
  const auto report = nonlinear_dirac_residual_on_line(taus, psi, dpsi, gamma(0) * m, m, 0.0);
  return 4.0 * report.max / (h * h);
}

double fd_tolerance(double C, double h) { return std::max(kFiniteDifferenceFloor, C * h * h); }

SpinorField plane_wave(const Multivector& psi0, const Multivector& p) {
  SpinorField f;
  f.value = [psi0, p](const Multivector& x) {
    const double theta = dot(p, x);
    return psi0 * (Multivector::scalar(std::cos(theta)) - kG21 * std::sin(theta));
  };
  f.gradient = [psi0, p](const Multivector& x) {
    const double theta = dot(p, x);
    const Multivector psi = psi0 * (Multivector::scalar(std::cos(theta)) - kG21 * std::sin(theta));
    // d_mu exp(-g21 p.x) = -p_mu g21 exp(-g21 p.x)
    std::array<Multivector, 4> g;
    for (int mu = 0; mu < 4; ++mu) g[mu] = psi * kG21 * (-kMetric[mu] * p[1 + mu]);
    return g;
  };
  return f;
}

SpinorField transport(const SpinorField& f, const Multivector& L) {
  const Multivector Lr = reversion(L);
  SpinorField out;
  out.value = [f, L, Lr](const Multivector& x) {
    return L * f.value(grade_projection(Lr * x * L, 1));
  };
  if (f.gradient) {
    out.gradient = [f, L, Lr](const Multivector& x) {
      const auto g = f.gradient(grade_projection(Lr * x * L, 1));
      std::array<Multivector, 4> r;
      for (int mu = 0; mu < 4; ++mu) {
        // Direction of d/dx^mu in the original coordinates.
        const Multivector a = grade_projection(Lr * gamma(mu) * L, 1);
        Multivector d;
        for (int nu = 0; nu < 4; ++nu) d += g[nu] * a[1 + nu];
        r[mu] = L * d;
      }
      return r;
    };
  }
  return out;
}

SpinorField offset(const SpinorField& f, const Multivector& delta) {
  SpinorField out;
  out.value = [f, delta](const Multivector& x) { return f.value(x) + delta; };
  out.gradient = f.gradient;
  return out;
}

double plane_wave_fd_bound(const Multivector& p, double psi_norm, double h) {
  double cube = 0.0;
  for (int mu = 0; mu < 4; ++mu) cube += std::pow(std::abs(p[1 + mu]), 3);
  return 2.0 * (h * h / 6.0) * psi_norm * cube;
}

ResidualReport dirac_hestenes_residual(const SpinorField& psi, const std::vector<Multivector>& points,
                                       double m, const EMField& A, const DerivativeOptions& opt,
                                       double tolerance) {
  std::vector<double> res;
  res.reserve(points.size());
  for (const auto& x : points) {
    const Multivector value = checked_value(psi, x);
    const Multivector r = dirac_operator(gradient_at(psi, x, opt)) * kG12 + value * gamma(0) * m +
                          A.potential(x) * value * A.charge();
    res.push_back(norm(r));
  }
  return make_report("dirac-hestenes", indices(points.size()), std::move(res), tolerance);
}

LinearizationReport linearization_check(const Multivector& p, double m, const SpinorField& psi,
                                        const std::vector<Multivector>& points,
                                        const DerivativeOptions& opt, double tolerance) {
  require_on_shell(p, m, "linearization_check");
  std::vector<double> eigen, reduced, stream;
  for (const auto& x : points) {
    const Multivector value = checked_value(psi, x);
    const auto grad = gradient_at(psi, x, opt);
    eigen.push_back(norm(dirac_operator(grad) * kG21 - p * value));

    Multivector pd;
    for (int mu = 0; mu < 4; ++mu) pd += grad[mu] * p[1 + mu];
    reduced.push_back(norm(pd * kG12 + p * value * gamma(0) * m));
  }

  // Stream-lines of the field pulled back to the rest frame of p.
  const Multivector L = boost_to(p / m);
  const Multivector Lr = reversion(L);
  const SpinorField rest = transport(psi, Lr);
  for (const auto& x : points) {
    const Multivector xr = grade_projection(Lr * x * L, 1);
    const Multivector value = checked_value(rest, xr);
    const Multivector v = grade_projection(value * gamma(0) * reversion(value), 1);
    Multivector along;
    if (opt.closed_form) {
      const auto g = rest.gradient(xr);
      for (int mu = 0; mu < 4; ++mu) along += g[mu] * v[1 + mu];
    } else {
      const double h = opt.spacing;
      along = (rest.value(xr + v * h) - rest.value(xr - v * h)) / (2.0 * h);
    }
    stream.push_back(streamline_residual(value, along, m, 0.0));
  }

  LinearizationReport out;
  out.eigen = make_report("eigenfunction", indices(points.size()), std::move(eigen), tolerance);
  out.reduced = make_report("reduced-dirac", indices(points.size()), std::move(reduced), tolerance);
  out.dirac = dirac_hestenes_residual(psi, points, m, EMField::free(), opt, tolerance);
  out.streamline = make_report("nonlinear-streamline", indices(points.size()), std::move(stream), tolerance);
  out.pass = out.eigen.pass && out.reduced.pass && out.dirac.pass && out.streamline.pass;
  return out;
}

ResidualReport nonlinear_dirac_residual_on_line(const std::vector<double>& taus,
                                                const std::vector<DHSpinor>& psi,
                                                const std::vector<Multivector>& dpsi,
                                                const Multivector& p, double m, double tolerance) {
  require_on_shell(p, m, "nonlinear_dirac_residual_on_line");
  const Multivector L = boost_to(p / m);
  const Multivector Lr = reversion(L);
  std::vector<double> res(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) {
    res[k] = streamline_residual(Lr * psi[k].value(), Lr * dpsi[k], m, taus[k]);
  }
  return make_report("nonlinear-dirac", taus, std::move(res), tolerance);
}

ResidualReport nonlinear_dirac_residual_on_line(const Trajectory& traj, double m, double tolerance) {
  if (!traj.field.is_free()) throw std::invalid_argument("nonlinear_dirac_residual_on_line: free runs only");
  const std::size_t n = traj.samples.size();
  std::vector<double> taus(n);
  std::vector<DHSpinor> psi(n);
  std::vector<Multivector> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    taus[k] = traj.samples[k].tau;
    psi[k] = traj.samples[k].psi;
    values[k] = psi[k].value();
  }
  const auto dpsi = finite_difference(values, traj.h);
  return nonlinear_dirac_residual_on_line(taus, psi, dpsi, free_momentum(traj), m, tolerance);
}

MeanVelocityReport mean_velocity_identity(const Trajectory& traj, double m, double tolerance,
                                          int periods) {
  if (!traj.field.is_free()) throw std::invalid_argument("mean_velocity_identity: free runs only");
  const Multivector p = free_momentum(traj);
  require_on_shell(p, m, "mean_velocity_identity");
  const Multivector L = boost_to(p / m);
  const Multivector Lr = reversion(L);

  MeanVelocityReport out;
  out.time_average = mean_velocity(traj, m, periods);
  out.p_over_m = grade_projection(p / m, 1);

  const std::size_t n = traj.samples.size();
  std::vector<double> taus(n), ac(n), bc(n);
  Multivector c0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = traj.samples[k];
    taus[k] = s.tau;
    // psi^-1 v psi~^-1 in the rest frame of p, carried back to the lab.
    const Multivector psi = Lr * s.psi.value();
    const Multivector v = grade_projection(psi * gamma(0) * reversion(psi), 1);
    const Multivector inv = inverse_at(psi, s.tau);
    const Multivector c = grade_projection(L * (inv * v * reversion(inv)) * Lr, 1);
    if (k == 0) c0 = c;
    out.c_variation = std::max(out.c_variation, max_abs(c - c0));
    ac[k] = max_abs(out.time_average - c);
    bc[k] = max_abs(out.p_over_m - c);
  }
  out.a_vs_b = make_report("mean-velocity:average-vs-p/m", {traj.samples.front().tau},
                           {max_abs(out.time_average - out.p_over_m)}, tolerance);
  out.a_vs_c = make_report("mean-velocity:average-vs-bilinear", taus, std::move(ac), tolerance);
  out.b_vs_c = make_report("mean-velocity:p/m-vs-bilinear", taus, std::move(bc), tolerance);
  out.pass = out.a_vs_b.pass && out.a_vs_c.pass && out.b_vs_c.pass && out.c_variation <= 1e-8;
  return out;
}

SpinMassReport spin_mass_identity(const Trajectory& traj, double m, double tolerance) {
  const std::size_t n = traj.samples.size();
  std::vector<double> taus(n), pv(n), os(n);
  for (std::size_t k = 0; k < n; ++k) {
    const BZState& s = traj.samples[k];
    taus[k] = s.tau;
    const Multivector p = s.pi + traj.field.potential(s.x) * traj.field.charge();
    const Multivector v = velocity_bilinear(s.psi);
    const Multivector dpsi = eom_derivatives(s, traj.field).dpsi;
    const Multivector omega = angular_velocity(s.psi.value(), dpsi);
    const Multivector S = spin_density_bivector(s.psi);
    pv[k] = std::abs(dot(p, v) - m);
    os[k] = std::abs(scalar_part(omega * S) - m);
  }
  SpinMassReport out;
  out.pv = make_report("spin-mass:p.v", taus, std::move(pv), tolerance);
  out.omega_s = make_report("spin-mass:omega.S", std::move(taus), std::move(os), tolerance);
  out.pass = out.pv.pass && out.omega_s.pass;
  return out;
}

SpinMassReport spin_mass_identity(const DHSpinor& psi0, const Multivector& p, double m,
                                  const std::vector<double>& taus, double tolerance) {
  std::vector<double> pv(taus.size()), os(taus.size());
  for (std::size_t k = 0; k < taus.size(); ++k) {
    const DHSpinor psi = free_spinor(psi0, p, m, taus[k]);
    const Multivector dpsi = free_spinor_rate(psi0, p, m, taus[k]).value();
    const Multivector v = velocity_bilinear(psi);
    const Multivector omega = angular_velocity(psi.value(), dpsi);
    pv[k] = std::abs(dot(p, v) - m);
    os[k] = std::abs(scalar_part(omega * spin_density_bivector(psi)) - m);
  }
  SpinMassReport out;
  out.pv = make_report("spin-mass:p.v", taus, std::move(pv), tolerance);
  out.omega_s = make_report("spin-mass:omega.S", taus, std::move(os), tolerance);
  out.pass = out.pv.pass && out.omega_s.pass;
  return out;
}

}  // namespace zbw
