#include "zbw/matrix_rep.hpp"

#include <cmath>
#include <string>

#include "zbw/errors.hpp"

namespace zbw {
namespace {

using cd = std::complex<double>;

std::array<MatrixRep, 4> make_gammas() {
  const cd i(0.0, 1.0);
  std::array<MatrixRep, 4> g;
  for (auto& m : g) m.setZero();
  g[0].diagonal() << 1.0, 1.0, -1.0, -1.0;

  const std::array<Eigen::Matrix2cd, 3> sigma = [&] {
    std::array<Eigen::Matrix2cd, 3> s;
    s[0] << 0.0, 1.0, 1.0, 0.0;
    s[1] << 0.0, -i, i, 0.0;
    s[2] << 1.0, 0.0, 0.0, -1.0;
    return s;
  }();
  for (int k = 0; k < 3; ++k) {
    g[k + 1].block<2, 2>(0, 2) = -sigma[k];
    g[k + 1].block<2, 2>(2, 0) = sigma[k];
  }
  return g;
}

const std::array<MatrixRep, 4>& gammas() {
  static const std::array<MatrixRep, 4> g = make_gammas();
  return g;
}

std::array<MatrixRep, kBladeCount> make_blades() {
  std::array<MatrixRep, kBladeCount> out;
  for (std::size_t b = 0; b < kBladeCount; ++b) {
    MatrixRep m = MatrixRep::Identity();
    for (int mu = 0; mu < 4; ++mu) {
      if (kBladeMask[b] & (1u << mu)) m = m * gammas()[mu];
    }
    out[b] = m;
  }
  return out;
}

}  // namespace

const MatrixRep& dirac_matrix(int mu) { return gammas().at(static_cast<std::size_t>(mu)); }

const std::array<MatrixRep, kBladeCount>& blade_matrices() {
  static const std::array<MatrixRep, kBladeCount> b = make_blades();
  return b;
}

MatrixRep matrix_rep(const Multivector& a) {
  MatrixRep m = MatrixRep::Zero();
  const auto& B = blade_matrices();
  for (std::size_t k = 0; k < kBladeCount; ++k) {
    if (a[k] != 0.0) m += a[k] * B[k];
  }
  return m;
}

Multivector from_matrix(const MatrixRep& M, double tol) {
  // Blade matrices are unitary, so B^-1 = B^dagger and tr(B^dagger B') = 4 delta.
  const auto& B = blade_matrices();
  Multivector a;
  for (std::size_t k = 0; k < kBladeCount; ++k) {
    a[k] = (B[k].adjoint() * M).trace().real() / 4.0;
  }
  const double scale = std::max(1.0, M.norm());
  const double miss = (matrix_rep(a) - M).norm();
  if (!(miss <= tol * scale)) {
    throw RepresentationError("from_matrix: matrix is outside the real algebra image (residual " +
                              std::to_string(miss) + ")");
  }
  return a;
}

std::optional<SignTableMismatch> find_sign_table_mismatch() {
  const auto& B = blade_matrices();
  for (std::size_t i = 0; i < kBladeCount; ++i) {
    for (std::size_t j = 0; j < kBladeCount; ++j) {
      const Multivector p =
          geometric_product(Multivector::blade(static_cast<Blade>(i)), Multivector::blade(static_cast<Blade>(j)));
      if (matrix_rep(p) != B[i] * B[j]) {
        return SignTableMismatch{static_cast<Blade>(i), static_cast<Blade>(j)};
      }
    }
  }
  return std::nullopt;
}

Multivector inverse(const Multivector& a, double max_condition) {
  const MatrixRep M = matrix_rep(a);
  Eigen::JacobiSVD<MatrixRep> svd(M);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(3);
  if (!(smin > 0.0) || smax / smin > max_condition) {
    throw SingularityError("inverse: matrix representation is singular (condition " +
                           std::to_string(smin > 0.0 ? smax / smin : INFINITY) + ")");
  }
  const MatrixRep Minv = M.fullPivLu().inverse();
  return from_matrix(Minv, 1e-8);
}

}  // namespace zbw
