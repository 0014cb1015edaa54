#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>

#include "zbw/clifford.hpp"

namespace zbw {

// Standard Dirac representation:
//   gamma_0 -> diag(1, 1, -1, -1),  gamma_i -> [[0, -sigma_i], [sigma_i, 0]].
using MatrixRep = Eigen::Matrix4cd;

const MatrixRep& dirac_matrix(int mu);

// Matrix of each canonical blade, built as the ordered product of its gammas.
const std::array<MatrixRep, kBladeCount>& blade_matrices();

MatrixRep matrix_rep(const Multivector& a);

// Trace projection onto the 16 blade matrices. Throws RepresentationError when
// the round trip misses M by more than tol (relative to max(1, |M|)).
Multivector from_matrix(const MatrixRep& M, double tol = 1e-9);

struct SignTableMismatch {
  Blade left;
  Blade right;
};

// Compares geometric_product on every ordered blade pair with the matrix
// product of the representation. Entries are small Gaussian integers, so the
// comparison is exact.
std::optional<SignTableMismatch> find_sign_table_mismatch();

}  // namespace zbw
