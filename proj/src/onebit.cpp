#include "orka/onebit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "orka/error.hpp"
#include "orka/random.hpp"

namespace orka {

Vec quantize_one_bit(std::span<const double> y, std::span<const double> tau) {
  if (y.size() != tau.size()) {
    throw Error(ErrorKind::DimensionMismatch, "signal and threshold lengths differ");
  }
  Vec r(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) r[k] = y[k] >= tau[k] ? 1.0 : -1.0;
  return r;
}

ThresholdEnsemble generate_thresholds(std::size_t n, std::size_t m, double mean, std::uint64_t seed) {
  if (n == 0 || m == 0) throw Error(ErrorKind::InvalidArgument, "threshold ensemble needs n, m >= 1");
  Rng rng(seed);
  std::normal_distribution<double> normal(mean, 1.0);
  DenseMatrix gamma(n, m);
  // Column-by-column so sequence l does not depend on m.
  for (std::size_t l = 0; l < m; ++l)
    for (std::size_t j = 0; j < n; ++j) gamma(j, l) = normal(rng);
  return {std::move(gamma), mean, seed};
}

OneBitPolyhedron polyhedron_from_capture(const DenseMatrix& a, const OneBitCapture& capture) {
  const std::size_t n = a.rows();
  const std::size_t d = a.cols();
  if (capture.r.rows() != n || capture.gamma.rows() != n || capture.r.cols() != capture.gamma.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "capture shape does not match the measurement matrix");
  }
  const std::size_t m = capture.r.cols();
  DenseMatrix c(m * n, d);
  Vec b(m * n);
  for (std::size_t l = 0; l < m; ++l) {
    for (std::size_t j = 0; j < n; ++j) {
      const double r = capture.r(j, l);
      // r a_j x >= r tau  <=>  -r a_j x <= -r tau
      auto src = a.row(j);
      auto dst = c.row(l * n + j);
      for (std::size_t i = 0; i < d; ++i) dst[i] = -r * src[i];
      b[l * n + j] = -r * capture.gamma(j, l);
    }
  }
  return {FeasibilityProblem::uniform(std::move(c), std::move(b), RowSense::LessEq, n), n};
}

BuiltPolyhedron build_polyhedron(const DenseMatrix& a, std::span<const double> y,
                                 const ThresholdEnsemble& ensemble) {
  const std::size_t n = a.rows();
  if (y.size() != n || ensemble.gamma.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch, "measurement, matrix and threshold lengths disagree");
  }
  require_finite(y, "measurements");
  const std::size_t m = ensemble.gamma.cols();
  OneBitCapture capture{DenseMatrix(n, m), ensemble.gamma};
  Vec tau(n);
  for (std::size_t l = 0; l < m; ++l) {
    for (std::size_t j = 0; j < n; ++j) tau[j] = ensemble.gamma(j, l);
    const Vec r = quantize_one_bit(y, tau);
    for (std::size_t j = 0; j < n; ++j) capture.r(j, l) = r[j];
  }
  OneBitPolyhedron poly = polyhedron_from_capture(a, capture);
  return {std::move(poly), std::move(capture)};
}

SolveReport orka_recover(const DenseMatrix& a, std::span<const double> y, std::size_t m,
                         const SolverConfig& cfg, std::uint64_t seed, double threshold_mean) {
  const auto start = std::chrono::steady_clock::now();
  const ThresholdEnsemble ensemble = generate_thresholds(a.rows(), m, threshold_mean, seed);
  const BuiltPolyhedron built = build_polyhedron(a, y, ensemble);
  const Vec x0(a.cols(), 0.0);
  SolveReport rep = solve(built.polyhedron.problem, cfg, x0);
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

AdaptiveResult adaptive_threshold_recover(const DenseMatrix& a, std::span<const double> y, std::size_t m,
                                          const SolverConfig& cfg, double delta, std::size_t max_outer,
                                          std::uint64_t seed, double threshold_mean) {
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
  if (max_outer == 0) throw Error(ErrorKind::InvalidArgument, "max_outer must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = a.rows();

  AdaptiveResult out;
  out.thresholds = generate_thresholds(n, m, threshold_mean, seed);
  Vec x(a.cols(), 0.0);
  std::size_t total_iters = 0;

  for (std::size_t k = 0; k < max_outer; ++k) {
    const BuiltPolyhedron built = build_polyhedron(a, y, out.thresholds);
    SolverConfig inner = cfg;
    inner.seed = mix_seed({cfg.seed, k});
    out.report = solve(built.polyhedron.problem, inner, x);
    total_iters += out.report.iterations;
    x = out.report.x;
    ++out.outer_iterations;

    // eps = Omega A x_k - r .* tau_k, then r .* tau_{k+1} = Omega A x_k - eps / 2.
    const Vec ax = multiply(a, x);
    const DenseMatrix& r = built.capture.r;
    DenseMatrix next = out.thresholds.gamma;
    double worst = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
      double moved_sq = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double rj = r(j, l);
        const double lhs = rj * ax[j];
        const double eps = lhs - rj * out.thresholds.gamma(j, l);
        const double tau_next = rj * (lhs - 0.5 * eps);
        const double step = tau_next - out.thresholds.gamma(j, l);
        moved_sq += step * step;
        next(j, l) = tau_next;
      }
      worst = std::max(worst, std::sqrt(moved_sq));
    }
    if (!std::isfinite(worst)) throw Error(ErrorKind::NonFinite, "threshold update diverged");
    out.movement.push_back(worst);
    out.thresholds.gamma = std::move(next);
    if (worst <= delta) {
      out.thresholds_converged = true;
      break;
    }
  }
  out.report.iterations = total_iters;
  out.report.seed = cfg.seed;
  out.report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace orka
