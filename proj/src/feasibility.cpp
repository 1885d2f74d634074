#include "orka/feasibility.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "orka/error.hpp"
#include "orka/linalg.hpp"

namespace orka {

FeasibilityProblem::FeasibilityProblem(DenseMatrix c, Vec b, std::vector<RowSense> senses,
                                       std::size_t block_rows)
    : c_(std::move(c)), b_(std::move(b)), senses_(std::move(senses)), block_rows_(block_rows) {
  if (c_.rows() == 0 || c_.cols() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "constraint matrix must be non-empty");
  }
  if (b_.size() != c_.rows() || senses_.size() != c_.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "constraint matrix has " + std::to_string(c_.rows()) +
                    " rows but right-hand side / senses have " + std::to_string(b_.size()) + " / " +
                    std::to_string(senses_.size()));
  }
  if (block_rows_ == 0 || c_.rows() % block_rows_ != 0) {
    throw Error(ErrorKind::DimensionMismatch, "row count is not a multiple of the block size");
  }
  require_finite(c_, "constraint matrix");
  require_finite(b_, "right-hand side");
  row_norms_sq_.resize(c_.rows());
  for (std::size_t j = 0; j < c_.rows(); ++j) {
    row_norms_sq_[j] = squared_norm(c_.row(j));
    if (row_norms_sq_[j] == 0.0) {
      throw Error(ErrorKind::InvalidArgument, "constraint row " + std::to_string(j) + " is all zero");
    }
  }
  frobenius_sq_ = std::accumulate(row_norms_sq_.begin(), row_norms_sq_.end(), 0.0);
}

FeasibilityProblem FeasibilityProblem::uniform(DenseMatrix c, Vec b, RowSense sense,
                                               std::size_t block_rows) {
  std::vector<RowSense> senses(c.rows(), sense);
  return FeasibilityProblem(std::move(c), std::move(b), std::move(senses), block_rows);
}

double FeasibilityProblem::row_residual(std::size_t j, std::span<const double> x) const noexcept {
  const double e = dot(c_.row(j), x) - b_[j];
  return senses_[j] == RowSense::LessEq ? std::max(e, 0.0) : e;
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::RKA: return "RKA";
    case Method::SKM: return "SKM";
    case Method::PrSKM: return "PrSKM";
    case Method::BlockSKM: return "BlockSKM";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "rka") return Method::RKA;
  if (lower == "skm") return Method::SKM;
  if (lower == "prskm") return Method::PrSKM;
  if (lower == "blockskm" || lower == "block_skm") return Method::BlockSKM;
  throw Error(ErrorKind::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

Vec positive_residual(const FeasibilityProblem& p, std::span<const double> x) {
  if (x.size() != p.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "iterate has " + std::to_string(x.size()) + " entries, problem has " +
                    std::to_string(p.dim()) + " columns");
  }
  Vec beta(p.rows());
  for (std::size_t j = 0; j < p.rows(); ++j) beta[j] = p.row_residual(j, x);
  return beta;
}

double residual_norm(const FeasibilityProblem& p, std::span<const double> x) {
  return norm2(positive_residual(p, x));
}

std::size_t sample_row_index(const FeasibilityProblem& p, Rng& rng) {
  const Vec& w = p.row_norms_sq();
  std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
  return dist(rng);
}

namespace {

void validate(const FeasibilityProblem& p, const SolverConfig& cfg, std::span<const double> x0) {
  if (x0.size() != p.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "initial iterate length does not match problem dimension");
  }
  require_finite(x0, "initial iterate");
  if (!(cfg.lambda > 0.0 && cfg.lambda < 2.0)) {
    throw Error(ErrorKind::InvalidLambda, "relaxation must lie in (0, 2), got " + std::to_string(cfg.lambda));
  }
  if (cfg.max_iters == 0) throw Error(ErrorKind::InvalidArgument, "max_iters must be positive");
  if (!(cfg.tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be non-negative");
}

// Shared driver: applies `step` until the residual drops to cfg.tol or the
// iteration budget runs out. The residual is evaluated on the logging cadence.
template <class Step>
SolveReport run(const FeasibilityProblem& p, const SolverConfig& cfg, std::span<const double> x0,
                Step&& step) {
  const auto start = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.seed = cfg.seed;
  rep.method = cfg.method;
  rep.lambda = cfg.lambda;
  rep.x.assign(x0.begin(), x0.end());

  const std::size_t cadence = (cfg.max_iters + 999) / 1000;
  Rng rng(cfg.seed);

  double res = residual_norm(p, rep.x);
  rep.residual_history.push_back(res);
  rep.converged = res <= cfg.tol;

  for (std::size_t it = 1; it <= cfg.max_iters && !rep.converged; ++it) {
    step(rep.x, rng);
    rep.iterations = it;
    if (it % cadence == 0 || it == cfg.max_iters) {
      res = residual_norm(p, rep.x);
      if (!std::isfinite(res)) {
        throw Error(ErrorKind::NonFinite, "iterate diverged at iteration " + std::to_string(it));
      }
      rep.residual_history.push_back(res);
      rep.converged = res <= cfg.tol;
    }
  }
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// Projection of x toward row j scaled by the relaxation.
inline void project_row(const FeasibilityProblem& p, std::size_t j, double beta, double lambda,
                        std::span<double> x) {
  const double f = lambda * beta / p.row_norms_sq()[j];
  auto cj = p.c().row(j);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= f * cj[i];
}

// Selection key: how strongly a row is violated. Equality rows count both signs.
inline double violation(const FeasibilityProblem& p, std::size_t j, double e) noexcept {
  return p.senses()[j] == RowSense::LessEq ? e : std::abs(e);
}

}  // namespace

SolveReport solve_rka(const FeasibilityProblem& p, const SolverConfig& cfg, std::span<const double> x0) {
  validate(p, cfg, x0);
  const Vec& w = p.row_norms_sq();
  std::discrete_distribution<std::size_t> rows(w.begin(), w.end());
  auto rep = run(p, cfg, x0, [&](Vec& x, Rng& rng) {
    const std::size_t j = rows(rng);
    const double beta = p.row_residual(j, x);
    if (beta != 0.0) project_row(p, j, beta, cfg.lambda, x);
  });
  rep.method = Method::RKA;
  return rep;
}

SolveReport solve_skm(const FeasibilityProblem& p, const SolverConfig& cfg, std::span<const double> x0) {
  validate(p, cfg, x0);
  const std::size_t m = p.rows();
  const std::size_t gamma = cfg.gamma == 0 ? (m + 9) / 10 : cfg.gamma;
  if (gamma < 1 || gamma > m) {
    throw Error(ErrorKind::InvalidArgument, "sample size gamma must lie in [1, rows]");
  }
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  auto rep = run(p, cfg, x0, [&](Vec& x, Rng& rng) {
    // Partial Fisher-Yates: perm[0..gamma) becomes a uniform subset.
    for (std::size_t i = 0; i < gamma; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, m - 1);
      std::swap(perm[i], perm[pick(rng)]);
    }
    std::size_t best = m;
    double best_key = 0.0;
    double best_beta = 0.0;
    for (std::size_t i = 0; i < gamma; ++i) {
      const std::size_t j = perm[i];
      const double beta = p.row_residual(j, x);
      const double key = violation(p, j, beta);
      if (key > best_key || (key == best_key && key > 0.0 && j < best)) {
        best = j;
        best_key = key;
        best_beta = beta;
      }
    }
    if (best < m) project_row(p, best, best_beta, cfg.lambda, x);
  });
  rep.method = Method::SKM;
  rep.gamma = gamma;
  return rep;
}

SolveReport solve_prskm(const FeasibilityProblem& p, const SolverConfig& cfg, std::span<const double> x0) {
  validate(p, cfg, x0);
  const auto start = std::chrono::steady_clock::now();
  const QrFactors qr = householder_qr(p.c());
  const DenseMatrix m = invert_upper_triangular(qr.r);
  FeasibilityProblem pre(multiply(p.c(), m), p.b(), p.senses(), p.block_rows());
  // x = M z, so the starting point in z coordinates is R x0.
  const Vec z0 = multiply(qr.r, x0);

  SolveReport rep = solve_skm(pre, cfg, z0);
  rep.x = multiply(m, rep.x);
  require_finite(rep.x, "recovered iterate");
  rep.method = Method::PrSKM;
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

SolveReport solve_block_skm(const FeasibilityProblem& p, const SolverConfig& cfg,
                            std::span<const double> x0) {
  validate(p, cfg, x0);
  const std::size_t d = p.dim();
  const std::size_t n = p.block_rows();
  std::size_t k = cfg.block_k == 0 ? (d + 1) / 2 : cfg.block_k;
  k = std::min(k, n);
  if (k < 1 || k >= d) {
    throw Error(ErrorKind::InvalidArgument, "block size k' must satisfy 1 <= k' < d");
  }

  Vec block_weight(p.block_count(), 0.0);
  for (std::size_t j = 0; j < p.rows(); ++j) block_weight[j / n] += p.row_norms_sq()[j];
  std::discrete_distribution<std::size_t> blocks(block_weight.begin(), block_weight.end());

  std::vector<std::size_t> order(n);
  Vec e(n);
  DenseMatrix sub(k, d);
  Vec v(k);

  auto rep = run(p, cfg, x0, [&](Vec& x, Rng& rng) {
    const std::size_t first = blocks(rng) * n;
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = dot(p.c().row(first + i), x) - p.b()[first + i];
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return violation(p, first + a, e[a]) > violation(p, first + b, e[b]);
    });
    bool any = false;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = first + order[i];
      const double ei = e[order[i]];
      v[i] = p.senses()[j] == RowSense::LessEq ? std::max(ei, 0.0) : ei;
      any = any || v[i] != 0.0;
      auto src = p.c().row(j);
      std::copy(src.begin(), src.end(), sub.row(i).begin());
    }
    if (!any) return;
    const Vec delta = apply_pseudo_inverse_wide(sub, v);
    for (std::size_t i = 0; i < d; ++i) x[i] -= cfg.lambda * delta[i];
  });
  rep.method = Method::BlockSKM;
  rep.block_k = k;
  return rep;
}

SolveReport solve(const FeasibilityProblem& p, const SolverConfig& cfg, std::span<const double> x0) {
  switch (cfg.method) {
    case Method::RKA: return solve_rka(p, cfg, x0);
    case Method::SKM: return solve_skm(p, cfg, x0);
    case Method::PrSKM: return solve_prskm(p, cfg, x0);
    case Method::BlockSKM: return solve_block_skm(p, cfg, x0);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown method");
}

namespace {
void require_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 2.0)) {
    throw Error(ErrorKind::InvalidLambda, "relaxation must lie in (0, 2)");
  }
}
}  // namespace

double rate_rka(const DenseMatrix& c) {
  const double kappa = scaled_condition_number(c);
  return 1.0 - 1.0 / (kappa * kappa);
}

double rate_skm(const DenseMatrix& c, double lambda) {
  require_lambda(lambda);
  const double kappa = scaled_condition_number(c);
  return 1.0 - (2.0 * lambda - lambda * lambda) / (kappa * kappa);
}

double rate_skm_tight(double sigma_min, double lambda, std::size_t m, std::size_t satisfied,
                      std::size_t gamma) {
  require_lambda(lambda);
  if (satisfied > m || gamma < 1 || gamma > m) {
    throw Error(ErrorKind::InvalidArgument, "need 0 <= s <= m and 1 <= gamma <= m");
  }
  const std::size_t l = std::max(m - satisfied, m - gamma);
  if (l == 0) throw Error(ErrorKind::DivisionByZero, "L = max(m - s, m - gamma) is zero");
  return 1.0 - sigma_min * sigma_min * (2.0 * lambda - lambda * lambda) / static_cast<double>(l);
}

}  // namespace orka
