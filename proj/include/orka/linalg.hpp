#pragma once

#include <span>

#include "orka/matrix.hpp"

namespace orka {

/// Relative rank tolerance used by every factorization in this library.
inline constexpr double kRankTolerance = 1e-12;

/// Thin QR factors: q is rows x cols with orthonormal columns, r is cols x cols
/// upper triangular with a strictly positive diagonal.
struct QrFactors {
  DenseMatrix q;
  DenseMatrix r;
};

/// Householder thin QR of a tall matrix. Throws RankDeficient when a diagonal
/// entry of R falls below kRankTolerance * ||a||_F.
QrFactors householder_qr(const DenseMatrix& a);

/// Inverse of a square upper-triangular matrix by back substitution.
/// Throws Singular when a diagonal entry is below kRankTolerance (scaled by the
/// largest diagonal magnitude when that exceeds one).
DenseMatrix invert_upper_triangular(const DenseMatrix& r);

/// Moore-Penrose inverse b^T (b b^T)^{-1} of a wide, full-row-rank matrix.
DenseMatrix pseudo_inverse_wide(const DenseMatrix& b);

/// Computes b^T (b b^T)^{-1} v without forming the pseudoinverse.
Vec apply_pseudo_inverse_wide(const DenseMatrix& b, std::span<const double> v);

/// Solves the square system a x = rhs by Gaussian elimination with partial
/// pivoting; a pivot below kRankTolerance * ||a||_F raises RankDeficient.
Vec solve_dense(const DenseMatrix& a, std::span<const double> rhs);

/// All min(rows, cols) singular values, descending.
///
/// One-sided (Hestenes) cyclic Jacobi: rotations orthogonalize the columns of
/// the tall orientation, which diagonalizes its Gram matrix implicitly without
/// squaring the condition number.
Vec singular_values(const DenseMatrix& a);

/// ||a||_F / sigma_min(a). Bounded below by sqrt(cols), with equality exactly
/// for scaled matrices with orthonormal columns.
double scaled_condition_number(const DenseMatrix& a);

}  // namespace orka
