#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace orka {

using Vec = std::vector<double>;

/// Dense real matrix, row-major.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Takes ownership of row-major `data`; throws DimensionMismatch on size
  /// disagreement and NonFinite on NaN/Inf entries.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> d);
  static DenseMatrix column(std::span<const double> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  DenseMatrix transpose() const;
  bool all_finite() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double norm2(std::span<const double> v) noexcept;
double squared_norm(std::span<const double> v) noexcept;

double frobenius_norm(const DenseMatrix& a) noexcept;

Vec multiply(const DenseMatrix& a, std::span<const double> x);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const DenseMatrix& a, double alpha);

/// Stacks the columns of `a` into a vector (column-major vectorization).
Vec vectorize(const DenseMatrix& a);
/// Inverse of vectorize for an rows x cols target.
DenseMatrix unvectorize(std::span<const double> v, std::size_t rows, std::size_t cols);

void require_finite(const DenseMatrix& a, const char* what);
void require_finite(std::span<const double> v, const char* what);

}  // namespace orka
