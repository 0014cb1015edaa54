#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "zbw/clifford.hpp"
#include "zbw/spinor.hpp"

namespace zbw {

// One monomial of a vector potential: coefficient * prod_mu (x^mu)^powers[mu],
// contributing to the upper-index component A^component.
struct PolynomialTerm {
  int component = 0;
  double coefficient = 0.0;
  std::array<int, 4> powers{};
};

class EMField {
 public:
  EMField() = default;

  static EMField free();
  // Uniform F; the potential is A = (1/2) x . F, so that d ^ A = F.
  static EMField constant(const Multivector& F, double charge);
  static EMField polynomial(std::vector<PolynomialTerm> terms, double charge);

  double charge() const { return charge_; }
  bool is_free() const { return std::holds_alternative<Free>(source_); }

  Multivector potential(const Multivector& x) const;
  Multivector field_strength(const Multivector& x) const;

 private:
  struct Free {};
  struct Constant {
    Multivector F;
  };
  struct Polynomial {
    std::vector<PolynomialTerm> terms;
  };

  std::variant<Free, Constant, Polynomial> source_;
  double charge_ = 0.0;
};

struct BZState {
  double tau = 0.0;
  Multivector x;
  Multivector pi;  // kinetic momentum p - eA
  DHSpinor psi;
};

struct StateRate {
  Multivector dx;
  Multivector dpi;
  Multivector dpsi;
};

// dpsi from psi' g1 g2 + pi psi g0 = 0, i.e. psi' = pi psi g0 g1 g2;
// dx = psi g0 reverse(psi); dpi = e F(x) . dx.
StateRate eom_derivatives(const BZState& s, const EMField& field);

// Weighted RK4 increment (k1 + 2k2 + 2k3 + k4) h / 6 for each variable.
StateRate rk4_increment(const BZState& s, const EMField& field, double h);

// One classical RK4 step. Throws NumericalOverflowError on non-finite values.
BZState step_rk4(const BZState& s, const EMField& field, double h);

struct Diagnostics {
  double H = 0.0;
  double p2 = 0.0;
  Tensor4 J{};
  Multivector v;
  Multivector S;  // density-weighted spin bivector
  double rho = 0.0;
  double beta = 0.0;
  double zbarz = 0.0;
};

struct Trajectory {
  double h = 0.0;
  double mass = 1.0;
  EMField field;
  std::vector<BZState> samples;
  std::vector<Diagnostics> diagnostics;
};

enum class FieldKind { free, constant, polynomial };

struct FieldSpec {
  FieldKind kind = FieldKind::free;
  Multivector F;                      // constant
  std::vector<PolynomialTerm> terms;  // polynomial
};

struct InitialCondition {
  enum class Kind { z, rotor };
  Kind kind = Kind::rotor;
  DiracSpinorZ z;
  double rho = 1.0;
  double beta = 0.0;
  Multivector rotor = Multivector::scalar(1.0);
  Multivector x;
  // Initial kinetic momentum; m g0 when absent.
  bool has_pi = false;
  Multivector pi;
  // Rescale psi so that H = m at tau = 0.
  bool normalize_energy = false;
};

struct ScenarioConfig {
  std::string name = "scenario";
  double m = 1.0;
  double e = 0.0;
  FieldSpec field;
  InitialCondition init;
  double tau_end = 0.0;
  double step = 0.0;
  std::size_t stride = 1;  // keep every stride-th sample

  // Throws ConfigError naming the offending field.
  void validate() const;
  EMField make_field() const;
  BZState initial_state() const;
};

// Default step 1e-3/m and span 10 pi/m.
ScenarioConfig default_scenario(double m);

// Integrates with a fixed RK4 step. The number of steps is the largest n with
// n h <= tau_end (plus a 1e-9 relative slack), and tau_n = n h exactly.
// Increments are accumulated with Kahan compensation so that the rounding
// floor stays well below the O(h^4) truncation error at h = 1e-3.
Trajectory simulate(const ScenarioConfig& cfg);

// Same integration, but a non-finite step ends the run instead of throwing:
// the samples recorded so far are kept and the failure is described.
struct SimulationResult {
  Trajectory trajectory;
  bool failed = false;
  double failure_tau = 0.0;
  std::string failure;
};
SimulationResult simulate_partial(const ScenarioConfig& cfg);

Diagnostics diagnose(const BZState& s, const EMField& field);

struct Conserved {
  double H = 0.0;
  double p2 = 0.0;
  Tensor4 J{};
  double zbarz = 0.0;
};

// H = <pi v>_0, p = pi + eA, J_{mu nu} = x_mu pi_nu - x_nu pi_mu + S_{mu nu}.
Conserved conserved_quantities(const BZState& s, const EMField& field = EMField::free());

// z(tau) = [cos(m tau) - i gamma^mu p_mu sin(m tau) / m] z0, in Dirac matrices.
// Throws MassShellError unless |p^2 - m^2| <= 1e-9 max(1, m^2).
DiracSpinorZ analytic_free_z(const DiracSpinorZ& z0, const Multivector& p, double m, double tau);

// v(tau) = pH/m^2 + (v0 - pH/m^2) cos(2 m tau) + a0 sin(2 m tau) / (2m).
Multivector analytic_free_velocity(const Multivector& v0, const Multivector& a0,
                                   const Multivector& p, double m, double H, double tau);

// Free spinor in closed form, psi(tau) = cos(m tau) psi0 + sin(m tau) p psi0 g012 / m,
// and its tau derivative.
DHSpinor free_spinor(const DHSpinor& psi0, const Multivector& p, double m, double tau);
DHSpinor free_spinor_rate(const DHSpinor& psi0, const Multivector& p, double m, double tau);

// psi = psi0 exp(-g2 g1 m tau); the one-argument form has psi0 = 1.
DHSpinor trivial_solution(double m, double tau);
DHSpinor trivial_solution(const DHSpinor& psi0, double m, double tau);

enum class HelixVariant { lightlike, spacelike };

struct HelixPoint {
  Multivector u;
  Multivector zeta;
  Multivector radius;
};

// Constituent path for the frame of R = exp(-g2 g1 m tau): u = e0 - e2 or
// e0 - e1 - e2, zeta(0) = zeta0, radius = zeta - x with x = zeta0 + g0 tau
// shifted to the helix axis.
HelixPoint lightlike_helix(double m, const Multivector& zeta0, double tau, HelixVariant variant);

// Trapezoidal time average of v over a whole number of periods pi/m from the
// first sample: the given count, or as many as fit when periods = 0. The last
// partial panel is closed by linear interpolation. Throws
// InsufficientDataError when the run is shorter than the requested span.
Multivector mean_velocity(const Trajectory& traj, double m, int periods = 0);

// Angular frequency of the given velocity component (1..3 for v^1..v^3) from
// the spacing of its crossings of the mid level (max + min) / 2.
double measure_zbw_frequency(const Trajectory& traj, int component = 1);

}  // namespace zbw
