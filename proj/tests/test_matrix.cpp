#include <cmath>
#include <limits>

#include "doctest.h"
#include "orka/matrix.hpp"
#include "support.hpp"

using namespace orka;
using orka::test::error_kind;

TEST_CASE("construction validates shape and finiteness") {
  CHECK(error_kind([] { DenseMatrix(2, 2, std::vector<double>{1, 2, 3}); }) == ErrorKind::DimensionMismatch);
  CHECK(error_kind([] { DenseMatrix(1, 2, std::vector<double>{1, std::nan("")}); }) == ErrorKind::NonFinite);
  CHECK(error_kind([] {
          DenseMatrix(1, 1, std::vector<double>{std::numeric_limits<double>::infinity()});
        }) == ErrorKind::NonFinite);
  CHECK(error_kind([] { DenseMatrix{{1, 2}, {3}}; }) == ErrorKind::DimensionMismatch);

  const DenseMatrix m{{1, 2, 3}, {4, 5, 6}};
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(1, 0) == 4);
  CHECK(m.row(1)[2] == 6);
}

TEST_CASE("transpose and products") {
  const DenseMatrix a{{1, 2}, {3, 4}, {5, 6}};
  const DenseMatrix at = a.transpose();
  CHECK(at == DenseMatrix{{1, 3, 5}, {2, 4, 6}});

  const Vec y = multiply(a, Vec{1, -1});
  CHECK(y == Vec{-1, -1, -1});

  // a^T a by hand: [[35, 44], [44, 56]]
  CHECK(multiply(at, a) == DenseMatrix{{35, 44}, {44, 56}});
  CHECK(error_kind([&] { multiply(a, a); }) == ErrorKind::DimensionMismatch);
  CHECK(error_kind([&] { multiply(a, Vec{1, 2, 3}); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("norms") {
  CHECK(norm2(Vec{3, 4}) == doctest::Approx(5.0));
  CHECK(squared_norm(Vec{3, 4}) == 25.0);
  CHECK(norm2(Vec{0, 0}) == 0.0);
  // Would overflow without scaling.
  CHECK(norm2(Vec{3e200, 4e200}) == doctest::Approx(5e200));
  CHECK(norm2(Vec{3e-200, 4e-200}) == doctest::Approx(5e-200));
  CHECK(frobenius_norm(DenseMatrix{{1, 2}, {2, 4}}) == doctest::Approx(5.0));
}

TEST_CASE("vectorize is column-major and unvectorize inverts it") {
  const DenseMatrix a{{1, 2, 3}, {4, 5, 6}};
  CHECK(vectorize(a) == Vec{1, 4, 2, 5, 3, 6});
  CHECK(unvectorize(vectorize(a), 2, 3) == a);
  CHECK(error_kind([] { unvectorize(Vec{1, 2, 3}, 2, 2); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("identity, diagonal, column helpers") {
  CHECK(DenseMatrix::identity(2) == DenseMatrix{{1, 0}, {0, 1}});
  CHECK(DenseMatrix::diagonal(Vec{3, 1}) == DenseMatrix{{3, 0}, {0, 1}});
  CHECK(DenseMatrix::column(Vec{1, 2}) == DenseMatrix{{1}, {2}});
  CHECK(scale(DenseMatrix{{1, -2}}, 3.0) == DenseMatrix{{3, -6}});
}
