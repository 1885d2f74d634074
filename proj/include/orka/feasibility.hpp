#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "orka/matrix.hpp"
#include "orka/random.hpp"

namespace orka {

enum class RowSense { Equality, LessEq };

/// Mixed system { c_j x = b_j (Equality), c_j x <= b_j (LessEq) }.
///
/// Rows may be grouped into consecutive blocks of `block_rows` rows; the
/// block solver samples whole blocks.
class FeasibilityProblem {
 public:
  FeasibilityProblem(DenseMatrix c, Vec b, std::vector<RowSense> senses, std::size_t block_rows = 1);

  /// All rows share `sense`.
  static FeasibilityProblem uniform(DenseMatrix c, Vec b, RowSense sense, std::size_t block_rows = 1);

  const DenseMatrix& c() const noexcept { return c_; }
  const Vec& b() const noexcept { return b_; }
  const std::vector<RowSense>& senses() const noexcept { return senses_; }
  std::size_t rows() const noexcept { return c_.rows(); }
  std::size_t dim() const noexcept { return c_.cols(); }
  std::size_t block_rows() const noexcept { return block_rows_; }
  std::size_t block_count() const noexcept { return c_.rows() / block_rows_; }
  /// ||c_j||_2^2 per row.
  const Vec& row_norms_sq() const noexcept { return row_norms_sq_; }
  double frobenius_sq() const noexcept { return frobenius_sq_; }

  /// Signed projection coefficient of one row: positive part for LessEq rows,
  /// raw residual for Equality rows.
  double row_residual(std::size_t j, std::span<const double> x) const noexcept;

 private:
  DenseMatrix c_;
  Vec b_;
  std::vector<RowSense> senses_;
  std::size_t block_rows_;
  Vec row_norms_sq_;
  double frobenius_sq_ = 0.0;
};

enum class Method { RKA, SKM, PrSKM, BlockSKM };

std::string_view to_string(Method m) noexcept;
/// Parses "RKA", "SKM", "PrSKM" or "BlockSKM" (case-insensitive).
Method parse_method(std::string_view name);

struct SolverConfig {
  Method method = Method::BlockSKM;
  double lambda = 1.0;
  /// Motzkin sample size; 0 selects ceil(rows / 10).
  std::size_t gamma = 0;
  /// Rows kept per block step; 0 selects ceil(d / 2).
  std::size_t block_k = 0;
  std::size_t max_iters = 100000;
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

struct SolveReport {
  Vec x;
  std::size_t iterations = 0;
  /// ||(Cx - b)^+||_2 sampled every ceil(max_iters / 1000) iterations, plus the
  /// initial and final values.
  std::vector<double> residual_history;
  bool converged = false;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  // Effective parameters after defaults were resolved.
  Method method = Method::RKA;
  double lambda = 1.0;
  std::size_t gamma = 0;
  std::size_t block_k = 0;
};

/// Per-row projection coefficients beta_j.
Vec positive_residual(const FeasibilityProblem& p, std::span<const double> x);

/// ||positive_residual(p, x)||_2.
double residual_norm(const FeasibilityProblem& p, std::span<const double> x);

/// Draws row k with probability ||c_k||^2 / ||C||_F^2.
std::size_t sample_row_index(const FeasibilityProblem& p, Rng& rng);

SolveReport solve_rka(const FeasibilityProblem& p, const SolverConfig& cfg, std::span<const double> x0);
SolveReport solve_skm(const FeasibilityProblem& p, const SolverConfig& cfg, std::span<const double> x0);
SolveReport solve_prskm(const FeasibilityProblem& p, const SolverConfig& cfg, std::span<const double> x0);
SolveReport solve_block_skm(const FeasibilityProblem& p, const SolverConfig& cfg, std::span<const double> x0);

/// Dispatches on cfg.method.
SolveReport solve(const FeasibilityProblem& p, const SolverConfig& cfg, std::span<const double> x0);

/// q = 1 - 1 / kappa^2(c).
double rate_rka(const DenseMatrix& c);
/// 1 - (2 lambda - lambda^2) / kappa^2(c).
double rate_skm(const DenseMatrix& c, double lambda);
/// 1 - sigma_min^2 (2 lambda - lambda^2) / L with L = max(m - s, m - gamma),
/// where s is the number of satisfied rows.
double rate_skm_tight(double sigma_min, double lambda, std::size_t m, std::size_t satisfied,
                      std::size_t gamma);

}  // namespace orka
