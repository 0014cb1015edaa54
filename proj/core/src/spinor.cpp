#include "zbw/spinor.hpp"

#include <cmath>
#include <numbers>

#include "zbw/errors.hpp"
#include "zbw/matrix_rep.hpp"

namespace zbw {
namespace {

using cd = std::complex<double>;

const Multivector kG21 = gamma(2) * gamma(1);

}  // namespace

DHSpinor::DHSpinor(const Multivector& psi, double tol) : psi_(even_part(psi)) {
  const double total = norm(psi);
  if (total > 0.0 && norm(odd_part(psi)) > tol * total) {
    throw GradeError("DHSpinor: value has odd-grade parts");
  }
}

DHSpinor DHSpinor::from_components(const std::array<double, 8>& c) {
  Multivector m;
  for (std::size_t k = 0; k < 8; ++k) m[kEvenBladeIndex[k]] = c[k];
  return DHSpinor(m);
}

std::array<double, 8> DHSpinor::components() const {
  std::array<double, 8> c{};
  for (std::size_t k = 0; k < 8; ++k) c[k] = psi_[kEvenBladeIndex[k]];
  return c;
}

std::array<cd, 4> DiracSpinorZ::bar() const {
  // gamma^0 = gamma_0 = diag(1, 1, -1, -1)
  return {std::conj(z[0]), std::conj(z[1]), -std::conj(z[2]), -std::conj(z[3])};
}

DHSpinor z_to_psi(const DiracSpinorZ& zs) {
  const auto& z = zs.z;
  const auto c = [](cd x) { return std::conj(x); };
  MatrixRep M;
  M << z[0], -c(z[1]), z[2], c(z[3]),
       z[1], c(z[0]), z[3], -c(z[2]),
       z[2], c(z[3]), z[0], -c(z[1]),
       z[3], -c(z[2]), z[1], c(z[0]);
  const Multivector psi = from_matrix(M);
  if (norm(odd_part(psi)) > 1e-9 * std::max(1.0, norm(psi))) {
    throw RepresentationError("z_to_psi: spinor matrix has odd-grade parts");
  }
  return DHSpinor(even_part(psi));
}

DiracSpinorZ psi_to_z(const DHSpinor& psi) {
  const MatrixRep M = matrix_rep(psi.value());
  DiracSpinorZ z;
  for (int r = 0; r < 4; ++r) z.z[r] = M(r, 0);
  return z;
}

RotorDecomposition rotor_decompose(const DHSpinor& psi) {
  const Multivector& p = psi.value();
  const Multivector q = p * reversion(p);
  const double a = q[Blade::scalar];
  const double b = q[Blade::g0123];
  const double rho = std::hypot(a, b);
  const double scale = norm(p) * norm(p);
  if (!(rho > 1e-12 * scale)) throw SingularSpinorError("rotor_decompose: psi reverse(psi) vanishes");

  double beta = std::atan2(b, a);
  if (beta <= -std::numbers::pi) beta = std::numbers::pi;

  // g5 commutes with even elements and g5^2 = -1, so exp(-beta g5/2) is
  // cos(beta/2) - g5 sin(beta/2).
  const Multivector unphase =
      Multivector::scalar(std::cos(beta / 2)) - kPseudoscalar * std::sin(beta / 2);
  RotorDecomposition out;
  out.rho = rho;
  out.beta = beta;
  out.rotor = unphase * p / std::sqrt(rho);
  return out;
}

DHSpinor compose_spinor(double rho, double beta, const Multivector& rotor) {
  const Multivector phase =
      Multivector::scalar(std::cos(beta / 2)) + kPseudoscalar * std::sin(beta / 2);
  return DHSpinor(phase * rotor * std::sqrt(rho));
}

Multivector velocity_bilinear(const DHSpinor& psi) {
  const Multivector& p = psi.value();
  return grade_projection(p * gamma(0) * reversion(p), 1);
}

bool is_rotor(const Multivector& R, double tol) {
  if (norm(odd_part(R)) > tol * std::max(1.0, norm(R))) return false;
  return norm(R * reversion(R) - Multivector::scalar(1.0)) <= tol;
}

Multivector spin_bivector(const Multivector& rotor) {
  if (!is_rotor(rotor)) throw RotorConstraintError("spin_bivector: R reverse(R) != 1");
  return grade_projection(rotor * kG21 * reversion(rotor), 2) * 0.5;
}

Multivector spin_density_bivector(const DHSpinor& psi) {
  const Multivector& p = psi.value();
  return grade_projection(p * kG21 * reversion(p), 2) * 0.5;
}

Tensor4 spin_tensor(const DiracSpinorZ& zs) {
  Eigen::Vector4cd z;
  for (int r = 0; r < 4; ++r) z(r) = zs.z[r];
  const Eigen::RowVector4cd zbar = z.adjoint() * dirac_matrix(0);
  const cd i(0.0, 1.0);
  Tensor4 S{};
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const MatrixRep comm =
          dirac_matrix(nu) * dirac_matrix(mu) - dirac_matrix(mu) * dirac_matrix(nu);
      const cd s = 0.25 * i * (zbar * comm * z)(0, 0);
      S[mu][nu] = s.real();
    }
  }
  return S;
}

Tensor4 spin_tensor(const Multivector& spin) {
  Tensor4 S{};
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      S[mu][nu] = mu == nu ? 0.0 : scalar_part(gamma(nu) * gamma(mu) * spin);
    }
  }
  return S;
}

std::array<double, 4> dirac_current(const DiracSpinorZ& zs) {
  Eigen::Vector4cd z;
  for (int r = 0; r < 4; ++r) z(r) = zs.z[r];
  const Eigen::RowVector4cd zbar = z.adjoint() * dirac_matrix(0);
  std::array<double, 4> v{};
  for (int mu = 0; mu < 4; ++mu) {
    v[mu] = kMetric[mu] * (zbar * dirac_matrix(mu) * z)(0, 0).real();
  }
  return v;
}

double zbar_z(const DiracSpinorZ& zs) {
  const auto b = zs.bar();
  cd s = 0.0;
  for (int r = 0; r < 4; ++r) s += b[r] * zs.z[r];
  return s.real();
}

Idempotent dirac_idempotent() {
  return {(Multivector::scalar(1.0) + gamma(0)) * 0.5};
}

Multivector boost_to(const Multivector& u) {
  const double u0 = u[Blade::g0];
  if (std::abs(dot(u, u) - 1.0) > 1e-9 || u0 <= 0.0) {
    throw std::invalid_argument("boost_to: target is not a unit future-pointing vector");
  }
  return (Multivector::scalar(1.0) + u * gamma(0)) / std::sqrt(2.0 * (1.0 + u0));
}

}  // namespace zbw
