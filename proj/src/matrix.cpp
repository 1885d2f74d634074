#include "orka/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "orka/error.hpp"

namespace orka {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::DimensionMismatch,
                "matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                    std::to_string(rows_ * cols_));
  }
  require_finite(*this, "matrix data");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(*this, "matrix literal");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
  DenseMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

DenseMatrix DenseMatrix::column(std::span<const double> v) {
  return DenseMatrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> v) noexcept { return dot(v, v); }

double norm2(std::span<const double> v) noexcept {
  // Scaled accumulation so that tiny or huge entries do not under/overflow.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) {
    const double y = x / scale;
    s += y * y;
  }
  return scale * std::sqrt(s);
}

double frobenius_norm(const DenseMatrix& a) noexcept { return norm2(a.data()); }

Vec multiply(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "matrix has " + std::to_string(a.cols()) + " columns, vector has " +
                    std::to_string(x.size()) + " entries");
  }
  Vec y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) y[r] = dot(a.row(r), x);
  return y;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "inner dimensions disagree in matrix product");
  }
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

DenseMatrix scale(const DenseMatrix& a, double alpha) {
  DenseMatrix s = a;
  for (double& v : s.data()) v *= alpha;
  return s;
}

Vec vectorize(const DenseMatrix& a) {
  Vec v;
  v.reserve(a.rows() * a.cols());
  for (std::size_t c = 0; c < a.cols(); ++c)
    for (std::size_t r = 0; r < a.rows(); ++r) v.push_back(a(r, c));
  return v;
}

DenseMatrix unvectorize(std::span<const double> v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols) {
    throw Error(ErrorKind::DimensionMismatch, "vector length does not match target shape");
  }
  DenseMatrix a(rows, cols);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) a(r, c) = v[c * rows + r];
  return a;
}

void require_finite(const DenseMatrix& a, const char* what) {
  if (!a.all_finite()) throw Error(ErrorKind::NonFinite, std::string(what) + " contains NaN or Inf");
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, std::string(what) + " contains NaN or Inf");
  }
}

}  // namespace orka
