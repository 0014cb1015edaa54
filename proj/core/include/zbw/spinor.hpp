#pragma once

#include <array>
#include <complex>

#include "zbw/clifford.hpp"

namespace zbw {

// Canonical indices of the even blades: 1, g01, g02, g03, g12, g13, g23, g0123.
// This is also the serialization order of a spinor (8 numbers).
inline constexpr std::array<std::size_t, 8> kEvenBladeIndex = {0, 5, 6, 7, 8, 9, 10, 15};

// Dirac-Hestenes spinor: an even multivector.
class DHSpinor {
 public:
  DHSpinor() = default;
  // Throws GradeError if the odd part is more than tol relative to the norm.
  explicit DHSpinor(const Multivector& psi, double tol = 1e-12);

  static DHSpinor from_components(const std::array<double, 8>& c);

  const Multivector& value() const { return psi_; }
  std::array<double, 8> components() const;

  friend bool operator==(const DHSpinor&, const DHSpinor&) = default;

 private:
  Multivector psi_;
};

// The classical Dirac spinor z of the Barut-Zanghi model.
struct DiracSpinorZ {
  std::array<std::complex<double>, 4> z{};

  // zbar = z^dagger gamma^0, as a row.
  std::array<std::complex<double>, 4> bar() const;
};

// Build the 4x4 matrix whose columns are (z, ...) in the Dirac representation
// and read it back as an even multivector.
DHSpinor z_to_psi(const DiracSpinorZ& z);

// First column of the matrix of psi.
DiracSpinorZ psi_to_z(const DHSpinor& psi);

// psi = rho^(1/2) exp(beta g5 / 2) R with R reverse(R) = 1.
struct RotorDecomposition {
  double rho = 1.0;
  double beta = 0.0;
  Multivector rotor = Multivector::scalar(1.0);
};

// beta in (-pi, pi]. Throws SingularSpinorError when psi reverse(psi) vanishes.
RotorDecomposition rotor_decompose(const DHSpinor& psi);
DHSpinor compose_spinor(double rho, double beta, const Multivector& rotor);

// v = psi g0 reverse(psi)
Multivector velocity_bilinear(const DHSpinor& psi);

// S = (1/2) R g2 g1 reverse(R); throws RotorConstraintError unless R is a rotor.
Multivector spin_bivector(const Multivector& rotor);

// Density-weighted form (1/2) psi g2 g1 reverse(psi), equal to rho times the
// rotor spin bivector when beta = 0.
Multivector spin_density_bivector(const DHSpinor& psi);

using Tensor4 = std::array<std::array<double, 4>, 4>;

// S_{mu nu} from the Dirac matrices, lower indices. The index order of the
// commutator is chosen so that J = L + S is conserved:
//   S_{mu nu} = (i/4) zbar [gamma_nu, gamma_mu] z.
Tensor4 spin_tensor(const DiracSpinorZ& z);

// Same tensor read off a spin bivector: S_{mu nu} = <g_nu g_mu S>_0. With
// S = spin_density_bivector(z_to_psi(z)) both routes agree.
Tensor4 spin_tensor(const Multivector& spin);

// zbar gamma^mu z, upper index.
std::array<double, 4> dirac_current(const DiracSpinorZ& z);

double zbar_z(const DiracSpinorZ& z);

struct Idempotent {
  Multivector eps;
};

// eps = (1 + g0) / 2
Idempotent dirac_idempotent();

bool is_rotor(const Multivector& R, double tol = 1e-10);

// Pure boost L with L g0 reverse(L) = u, for a unit future-pointing u.
Multivector boost_to(const Multivector& u);

}  // namespace zbw
