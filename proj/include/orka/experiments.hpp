#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orka/feasibility.hpp"
#include "orka/matrix.hpp"

namespace orka {

enum class ExperimentKind { EqualitySystem, InequalitySystem, LowRank, CompressedSensing };

std::string_view to_string(ExperimentKind k) noexcept;
ExperimentKind parse_experiment_kind(std::string_view name);

/// One grid of trials. For the one-bit kinds `n_rows` is the number of
/// measurements and each m in `m_list` is a number of threshold sequences; for
/// EqualitySystem m counts stacked n_rows x dim blocks.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::LowRank;
  std::size_t n_rows = 200;
  std::size_t dim = 25;
  std::size_t rank_or_sparsity = 1;
  std::vector<std::size_t> m_list{10, 20, 30, 40, 50, 60};
  std::size_t trials = 15;
  SolverConfig solver;
  bool adaptive = false;
  double delta = 1e-6;
  std::size_t max_outer = 20;
  double threshold_mean = 0.0;
  std::uint64_t seed = 0;
};

struct TrialRecord {
  std::string method;
  std::size_t m = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  double nmse = 0.0;  // NaN marks a failed trial
  double wall_time_s = 0.0;
};

DenseMatrix gen_gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);
Vec gen_gaussian_vector(std::size_t n, std::uint64_t seed);
/// X = K K^T with K an n1 x rank standard Gaussian matrix.
DenseMatrix gen_low_rank_target(std::size_t n1, std::size_t rank, std::uint64_t seed);
/// Exactly k nonzero N(0,1) entries at uniformly chosen positions.
Vec gen_sparse_target(std::size_t n, std::size_t k, std::uint64_t seed);

double nmse_vector(std::span<const double> x_star, std::span<const double> x_hat);
double nmse_matrix(const DenseMatrix& x_star, const DenseMatrix& x_hat);

/// CDF of N(mean, sd^2).
std::function<double(double)> gaussian_cdf(double mean = 0.0, double sd = 1.0);

/// Log-likelihood of sign data under threshold CDF `cdf`. Probabilities are
/// clamped at 1e-300; `clamped` (optional) receives how many were.
double one_bit_log_likelihood(const DenseMatrix& a, std::span<const double> r, std::span<const double> x,
                              const std::function<double(double)>& cdf, std::size_t* clamped = nullptr);

/// 1e-3 * ||A^T y||_inf.
double default_ista_lambda(const DenseMatrix& a, std::span<const double> y);

/// 0.5 ||y - A x||^2 + lambda ||x||_1.
double lasso_objective(const DenseMatrix& a, std::span<const double> y, std::span<const double> x,
                       double lambda);

/// Iterative soft thresholding with step 1 / ||A^T A||_2, starting from 0.
/// `objective_trace`, when given, receives the objective after every iteration.
Vec ista_l1_baseline(const DenseMatrix& a, std::span<const double> y, double lambda_reg, std::size_t iters,
                     std::vector<double>* objective_trace = nullptr);

/// Worker count from ORKA_THREADS, else the hardware concurrency.
std::size_t default_thread_count();

/// Runs every (m, trial) cell; records come back sorted by (m, trial).
/// `threads` = 0 uses default_thread_count().
std::vector<TrialRecord> run_trial_grid(const ExperimentSpec& spec, std::size_t threads = 0);

/// Mean NMSE per m, skipping failed trials.
struct GridSummary {
  std::size_t m = 0;
  double mean_nmse = 0.0;
  std::size_t ok = 0;
  std::size_t failed = 0;
};
std::vector<GridSummary> summarize(std::span<const TrialRecord> records);

}  // namespace orka
