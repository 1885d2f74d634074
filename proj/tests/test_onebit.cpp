#include <cmath>

#include "doctest.h"
#include "orka/analysis.hpp"
#include "orka/experiments.hpp"
#include "orka/linalg.hpp"
#include "orka/onebit.hpp"
#include "support.hpp"

using namespace orka;
using orka::test::error_kind;

TEST_CASE("quantize_one_bit") {
  CHECK(quantize_one_bit(Vec{0.5, -0.2}, Vec{0, 0}) == Vec{1, -1});
  CHECK(quantize_one_bit(Vec{0.3, -4}, Vec{0.3, -4}) == Vec{1, 1});
  CHECK(quantize_one_bit(Vec{1, 2, 3}, Vec{2, 2, 2}) == Vec{-1, 1, 1});
  CHECK(error_kind([] { quantize_one_bit(Vec{1}, Vec{1, 2}); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("generate_thresholds") {
  const auto e = generate_thresholds(1000, 1000, 0.0, 5);
  const auto data = e.gamma.data();
  double mean = 0.0;
  for (double v : data) mean += v;
  mean /= static_cast<double>(data.size());
  double var = 0.0;
  for (double v : data) var += (v - mean) * (v - mean);
  var /= static_cast<double>(data.size() - 1);
  CHECK(std::abs(mean) <= 0.005);
  CHECK(std::abs(var - 1.0) <= 0.01);

  CHECK(generate_thresholds(20, 3, 0.0, 9).gamma == generate_thresholds(20, 3, 0.0, 9).gamma);
  CHECK_FALSE(generate_thresholds(20, 3, 0.0, 9).gamma == generate_thresholds(20, 3, 0.0, 10).gamma);

  // Sequences are nested: the first columns do not depend on m.
  const auto small = generate_thresholds(15, 2, 0.0, 4);
  const auto big = generate_thresholds(15, 6, 0.0, 4);
  for (std::size_t j = 0; j < 15; ++j)
    for (std::size_t l = 0; l < 2; ++l) CHECK(small.gamma(j, l) == big.gamma(j, l));

  const auto shifted = generate_thresholds(200, 200, 3.0, 5);
  double sm = 0.0;
  for (double v : shifted.gamma.data()) sm += v;
  CHECK(sm / 40000.0 == doctest::Approx(3.0).epsilon(0.01));
  CHECK(error_kind([] { generate_thresholds(0, 3, 0.0, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("build_polyhedron") {
  SUBCASE("identity toy") {
    ThresholdEnsemble e{DenseMatrix(2, 1, 0.0), 0.0, 0};
    const auto built = build_polyhedron(DenseMatrix::identity(2), Vec{1, -1}, e);
    CHECK(built.capture.r == DenseMatrix{{1}, {-1}});
    // x1 >= 0 and -x2 >= 0, stored negated.
    const auto& p = built.polyhedron.problem;
    CHECK(p.c() == DenseMatrix{{-1, 0}, {0, 1}});
    CHECK(p.b()[0] == 0.0);
    CHECK(p.b()[1] == 0.0);
    for (RowSense s : p.senses()) CHECK(s == RowSense::LessEq);
  }

  SUBCASE("low-rank sized instance") {
    const DenseMatrix a = gen_gaussian_matrix(200, 25, 1);
    const Vec y = multiply(a, gen_gaussian_vector(25, 2));
    const auto built = build_polyhedron(a, y, generate_thresholds(200, 10, 0.0, 3));
    CHECK(built.polyhedron.problem.rows() == 2000);
    CHECK(built.polyhedron.problem.dim() == 25);
    CHECK(built.polyhedron.block_rows == 200);
    CHECK(built.polyhedron.problem.block_count() == 10);
  }

  SUBCASE("row layout is sequence-major") {
    const DenseMatrix a{{1, 2}, {3, 4}, {5, 6}};
    const Vec y{0, 0, 0};
    ThresholdEnsemble e{DenseMatrix{{-1, 1}, {-1, 1}, {1, -1}}, 0.0, 0};
    const auto built = build_polyhedron(a, y, e);
    const auto& p = built.polyhedron.problem;
    for (std::size_t l = 0; l < 2; ++l) {
      for (std::size_t j = 0; j < 3; ++j) {
        const double r = built.capture.r(j, l);
        CHECK(r == (0.0 >= e.gamma(j, l) ? 1.0 : -1.0));
        CHECK(p.c()(l * 3 + j, 0) == -r * a(j, 0));
        CHECK(p.c()(l * 3 + j, 1) == -r * a(j, 1));
        CHECK(p.b()[l * 3 + j] == -r * e.gamma(j, l));
      }
    }
  }

  CHECK(error_kind([] {
          build_polyhedron(DenseMatrix::identity(2), Vec{1, 2, 3}, generate_thresholds(2, 1, 0.0, 1));
        }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("property: truth is feasible, signs are consistent, P^T P = m A^T A") {
  for (std::uint64_t rep = 0; rep < 25; ++rep) {
    const std::size_t n = 5 + rep % 17;
    const std::size_t d = 2 + rep % 6;
    const std::size_t m = 1 + rep % 5;
    const DenseMatrix a = gen_gaussian_matrix(n, d, mix_seed({rep, 1}));
    const Vec x = gen_gaussian_vector(d, mix_seed({rep, 2}));
    const Vec y = multiply(a, x);
    const auto built = build_polyhedron(a, y, generate_thresholds(n, m, 0.0, mix_seed({rep, 3})));

    for (double v : positive_residual(built.polyhedron.problem, x)) CHECK(v == 0.0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < m; ++l) CHECK(built.capture.r(j, l) * (y[j] - built.capture.gamma(j, l)) >= 0.0);

    const DenseMatrix& p = built.polyhedron.problem.c();
    const DenseMatrix ptp = multiply(p.transpose(), p);
    const DenseMatrix ata = scale(multiply(a.transpose(), a), static_cast<double>(m));
    double diff = 0.0;
    for (std::size_t i = 0; i < ptp.data().size(); ++i) diff += std::pow(ptp.data()[i] - ata.data()[i], 2);
    CHECK(std::sqrt(diff) <= 1e-9 * frobenius_norm(ata));
  }
}

TEST_CASE("property: stacked singular values scale by sqrt(m)") {
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    const DenseMatrix a = gen_gaussian_matrix(20, 5, mix_seed({rep, 11}));
    const Vec y = multiply(a, gen_gaussian_vector(5, rep));
    const std::size_t m = 2 + rep % 4;
    const auto built = build_polyhedron(a, y, generate_thresholds(20, m, 0.0, rep));
    const Vec sp = singular_values(built.polyhedron.problem.c());
    const Vec sa = singular_values(a);
    for (std::size_t i = 0; i < 5; ++i)
      CHECK(std::abs(sp[i] - std::sqrt(static_cast<double>(m)) * sa[i]) <= 1e-8 * sp[i]);
    CHECK(scaled_condition_number(built.polyhedron.problem.c()) ==
          doctest::Approx(scaled_condition_number(a)).epsilon(1e-8));
  }
  // A = I gives the ideal sqrt(n).
  for (std::size_t n : {5u, 20u}) {
    const auto built = build_polyhedron(DenseMatrix::identity(n), gen_gaussian_vector(n, n),
                                        generate_thresholds(n, 3, 0.0, n));
    CHECK(std::abs(scaled_condition_number(built.polyhedron.problem.c()) - std::sqrt(static_cast<double>(n))) <=
          1e-9);
  }
}

TEST_CASE("orka_recover") {
  SUBCASE("two-dimensional toy recovers the point") {
    const Vec x{0.3, -0.7};
    SolverConfig cfg;
    cfg.method = Method::BlockSKM;
    cfg.block_k = 1;
    cfg.max_iters = 100000;
    const auto rep = orka_recover(DenseMatrix::identity(2), x, 200, cfg, 17);
    CHECK(std::abs(rep.x[0] - x[0]) <= 0.05);
    CHECK(std::abs(rep.x[1] - x[1]) <= 0.05);
  }

  SUBCASE("solution lies in the polyhedron and the pipeline is deterministic") {
    const DenseMatrix a = gen_gaussian_matrix(40, 6, 21);
    const Vec y = multiply(a, gen_gaussian_vector(6, 22));
    for (Method method : {Method::PrSKM, Method::BlockSKM}) {
      SolverConfig cfg;
      cfg.method = method;
      cfg.seed = 3;
      cfg.max_iters = 200000;
      const auto r1 = orka_recover(a, y, 5, cfg, 23);
      const auto r2 = orka_recover(a, y, 5, cfg, 23);
      CHECK(r1.x == r2.x);
      CHECK(r1.iterations == r2.iterations);
      CHECK(r1.converged);
      const auto built = build_polyhedron(a, y, generate_thresholds(40, 5, 0.0, 23));
      CHECK(residual_norm(built.polyhedron.problem, r1.x) <= 1e-8);
    }
  }
}

TEST_CASE("adaptive_threshold_recover") {
  const DenseMatrix a = gen_gaussian_matrix(60, 8, 31);
  const Vec x_true = gen_gaussian_vector(8, 32);
  const Vec y = multiply(a, x_true);
  SolverConfig cfg;
  cfg.method = Method::BlockSKM;
  cfg.max_iters = 20000;
  cfg.seed = 5;

  SUBCASE("first update halves the slack of every row") {
    const auto res = adaptive_threshold_recover(a, y, 3, cfg, 1e-12, 1, 33);
    REQUIRE(res.outer_iterations == 1);
    const auto initial = generate_thresholds(60, 3, 0.0, 33);
    const auto built = build_polyhedron(a, y, initial);
    const Vec ax = multiply(a, res.report.x);
    for (std::size_t l = 0; l < 3; ++l) {
      for (std::size_t j = 0; j < 60; ++j) {
        const double r = built.capture.r(j, l);
        const double eps = r * ax[j] - r * initial.gamma(j, l);
        const double slack_after = r * ax[j] - r * res.thresholds.gamma(j, l);
        CHECK(slack_after == doctest::Approx(eps / 2).epsilon(1e-12).scale(1.0));
      }
    }
  }

  SUBCASE("an iterate on every hyperplane leaves the thresholds fixed") {
    // From x0 = 0 both rows x_j >= 0.5 are violated; exact projections land
    // on the hyperplanes, so eps = 0 and the update moves nothing.
    SolverConfig rka;
    rka.method = Method::RKA;
    rka.max_iters = 1000;
    ThresholdEnsemble half{DenseMatrix{{0.5}, {0.5}}, 0.0, 0};
    const auto built = build_polyhedron(DenseMatrix::identity(2), Vec{1, 2}, half);
    const auto rep = solve(built.polyhedron.problem, rka, Vec{0, 0});
    CHECK(rep.x == Vec{0.5, 0.5});
    for (std::size_t j = 0; j < 2; ++j) {
      const double r = built.capture.r(j, 0);
      const double eps = r * rep.x[j] - r * half.gamma(j, 0);
      CHECK(eps == 0.0);
      CHECK(r * (r * rep.x[j] - eps / 2) == half.gamma(j, 0));
    }
  }

  SUBCASE("terminates and reports finite movement") {
    const auto res = adaptive_threshold_recover(a, y, 2, cfg, 1e-6, 30, 34);
    CHECK(res.outer_iterations >= 1);
    CHECK(res.outer_iterations <= 30);
    CHECK(res.movement.size() == res.outer_iterations);
    for (double mv : res.movement) CHECK(std::isfinite(mv));
    if (res.thresholds_converged) CHECK(res.movement.back() <= 1e-6);
    const auto again = adaptive_threshold_recover(a, y, 2, cfg, 1e-6, 30, 34);
    CHECK(again.report.x == res.report.x);
    CHECK(again.thresholds.gamma == res.thresholds.gamma);
  }

  SUBCASE("argument validation") {
    CHECK(error_kind([&] { adaptive_threshold_recover(a, y, 2, cfg, 0.0, 3, 1); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([&] { adaptive_threshold_recover(a, y, 2, cfg, 1e-3, 0, 1); }) == ErrorKind::InvalidArgument);
  }
}

TEST_CASE("property: adaptive thresholds shrink the mean hyperplane distance") {
  double initial_mu1 = 0.0;
  double adaptive_mu1 = 0.0;
  for (std::uint64_t trial = 0; trial < 15; ++trial) {
    const DenseMatrix a = gen_gaussian_matrix(100, 10, mix_seed({trial, 1}));
    const Vec x = gen_gaussian_vector(10, mix_seed({trial, 2}));
    const Vec y = multiply(a, x);
    SolverConfig cfg;
    cfg.max_iters = 5000;
    cfg.seed = trial;
    const auto res = adaptive_threshold_recover(a, y, 2, cfg, 1e-6, 10, mix_seed({trial, 3}));
    const auto start = build_polyhedron(a, y, generate_thresholds(100, 2, 0.0, mix_seed({trial, 3})));
    const auto end = build_polyhedron(a, y, res.thresholds);
    initial_mu1 += average_distance(hyperplane_distances(a, x, start.capture)) / 15.0;
    adaptive_mu1 += average_distance(hyperplane_distances(a, x, end.capture)) / 15.0;
  }
  MESSAGE("mean distance: initial " << initial_mu1 << ", adaptive " << adaptive_mu1);
  CHECK(adaptive_mu1 < initial_mu1);
}
