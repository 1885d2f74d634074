#include "orka/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "orka/error.hpp"

namespace orka {

QrFactors householder_qr(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n || n == 0) {
    throw Error(ErrorKind::DimensionMismatch, "householder_qr needs rows >= cols >= 1");
  }
  require_finite(a, "householder_qr input");
  const double scale = frobenius_norm(a);

  DenseMatrix r = a;
  // Householder vectors, stored column by column (length m - k each).
  std::vector<Vec> reflectors(n);

  for (std::size_t k = 0; k < n; ++k) {
    Vec v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = r(i, k);
    const double xnorm = norm2(v);
    if (xnorm == 0.0) continue;
    const double alpha = v[0] >= 0.0 ? -xnorm : xnorm;
    v[0] -= alpha;
    const double vnorm = norm2(v);
    if (vnorm == 0.0) continue;
    for (double& e : v) e /= vnorm;

    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += v[i - k] * r(i, j);
      s *= 2.0;
      for (std::size_t i = k; i < m; ++i) r(i, j) -= s * v[i - k];
    }
    r(k, k) = alpha;
    for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0.0;
    reflectors[k] = std::move(v);
  }

  // Accumulate the thin Q by applying the reflectors to the first n columns of I.
  DenseMatrix q(m, n);
  for (std::size_t i = 0; i < n; ++i) q(i, i) = 1.0;
  for (std::size_t kk = n; kk-- > 0;) {
    const Vec& v = reflectors[kk];
    if (v.empty()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = kk; i < m; ++i) s += v[i - kk] * q(i, j);
      s *= 2.0;
      for (std::size_t i = kk; i < m; ++i) q(i, j) -= s * v[i - kk];
    }
  }

  DenseMatrix rr(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) rr(i, j) = r(i, j);

  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(rr(i, i)) < kRankTolerance * scale) {
      throw Error(ErrorKind::RankDeficient,
                  "R diagonal entry " + std::to_string(i) + " is below the rank tolerance");
    }
    if (rr(i, i) < 0.0) {
      for (std::size_t j = i; j < n; ++j) rr(i, j) = -rr(i, j);
      for (std::size_t row = 0; row < m; ++row) q(row, i) = -q(row, i);
    }
  }
  return {std::move(q), std::move(rr)};
}

DenseMatrix invert_upper_triangular(const DenseMatrix& r) {
  const std::size_t n = r.rows();
  if (n != r.cols() || n == 0) {
    throw Error(ErrorKind::DimensionMismatch, "invert_upper_triangular needs a square matrix");
  }
  require_finite(r, "invert_upper_triangular input");
  double largest = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (r(i, j) != 0.0) {
        throw Error(ErrorKind::InvalidArgument, "matrix is not upper triangular");
      }
    }
    largest = std::max(largest, std::abs(r(i, i)));
  }
  const double threshold = kRankTolerance * std::max(1.0, largest);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(r(i, i)) < threshold) {
      throw Error(ErrorKind::Singular,
                  "diagonal entry " + std::to_string(i) + " is below the singularity threshold");
    }
  }

  // Column j of the inverse solves R x = e_j; only rows 0..j are nonzero.
  DenseMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    inv(j, j) = 1.0 / r(j, j);
    for (std::size_t i = j; i-- > 0;) {
      double s = 0.0;
      for (std::size_t k = i + 1; k <= j; ++k) s += r(i, k) * inv(k, j);
      inv(i, j) = -s / r(i, i);
    }
  }
  return inv;
}

namespace {

DenseMatrix gram_rows(const DenseMatrix& b) {
  const std::size_t k = b.rows();
  DenseMatrix g(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      const double s = dot(b.row(i), b.row(j));
      g(i, j) = s;
      g(j, i) = s;
    }
  }
  return g;
}

// LU with partial pivoting, solving for several right-hand sides at once.
// `rhs` is k x p and is overwritten with the solution.
void lu_solve_in_place(DenseMatrix a, DenseMatrix& rhs) {
  const std::size_t n = a.rows();
  const double threshold = kRankTolerance * frobenius_norm(a);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t i = col + 1; i < n; ++i) {
      if (std::abs(a(i, col)) > std::abs(a(pivot, col))) pivot = i;
    }
    if (!(std::abs(a(pivot, col)) >= threshold) || a(pivot, col) == 0.0) {
      throw Error(ErrorKind::RankDeficient, "pivot below the rank tolerance");
    }
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      for (std::size_t j = 0; j < rhs.cols(); ++j) std::swap(rhs(col, j), rhs(pivot, j));
    }
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = a(i, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
      for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(i, j) -= f * rhs(col, j);
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = 0; j < rhs.cols(); ++j) {
      double s = rhs(i, j);
      for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * rhs(k, j);
      rhs(i, j) = s / a(i, i);
    }
  }
}

void require_wide(const DenseMatrix& b) {
  if (b.rows() == 0 || b.rows() >= b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "pseudo_inverse_wide needs 1 <= rows < cols");
  }
  require_finite(b, "pseudo_inverse_wide input");
}

}  // namespace

Vec solve_dense(const DenseMatrix& a, std::span<const double> rhs) {
  if (a.rows() != a.cols() || rhs.size() != a.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "solve_dense needs a square system");
  }
  DenseMatrix x = DenseMatrix::column(rhs);
  lu_solve_in_place(a, x);
  return {x.data().begin(), x.data().end()};
}

DenseMatrix pseudo_inverse_wide(const DenseMatrix& b) {
  require_wide(b);
  DenseMatrix y = b;  // solve (b b^T) y = b, then b^+ = y^T
  lu_solve_in_place(gram_rows(b), y);
  return y.transpose();
}

Vec apply_pseudo_inverse_wide(const DenseMatrix& b, std::span<const double> v) {
  require_wide(b);
  if (v.size() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "right-hand side length must equal rows");
  }
  const Vec w = solve_dense(gram_rows(b), v);
  Vec out(b.cols(), 0.0);
  for (std::size_t i = 0; i < b.rows(); ++i) {
    auto bi = b.row(i);
    for (std::size_t j = 0; j < b.cols(); ++j) out[j] += bi[j] * w[i];
  }
  return out;
}

Vec singular_values(const DenseMatrix& a) {
  if (a.empty()) throw Error(ErrorKind::DimensionMismatch, "singular_values of an empty matrix");
  require_finite(a, "singular_values input");

  const bool tall = a.rows() >= a.cols();
  const std::size_t m = tall ? a.rows() : a.cols();
  const std::size_t n = tall ? a.cols() : a.rows();

  // Column-major working copy of the tall orientation.
  std::vector<Vec> cols(n, Vec(m));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) cols[j][i] = tall ? a(i, j) : a(j, i);

  constexpr double eps = 1e-15;
  constexpr int max_sweeps = 80;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        Vec& up = cols[p];
        Vec& uq = cols[q];
        const double alpha = squared_norm(up);
        const double beta = squared_norm(uq);
        const double gamma = dot(up, uq);
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double x = up[i];
          const double y = uq[i];
          up[i] = c * x - s * y;
          uq[i] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }

  Vec sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(cols[j]);
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

double scaled_condition_number(const DenseMatrix& a) {
  if (a.rows() < a.cols()) {
    throw Error(ErrorKind::RankDeficient, "a wide matrix cannot have full column rank");
  }
  const Vec sigma = singular_values(a);
  const double smax = sigma.front();
  const double smin = sigma.back();
  if (smax == 0.0 || smin < kRankTolerance * smax) {
    throw Error(ErrorKind::RankDeficient, "smallest singular value is below the rank tolerance");
  }
  return frobenius_norm(a) / smin;
}

}  // namespace orka
