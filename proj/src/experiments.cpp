#include "orka/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <thread>

#include "orka/error.hpp"
#include "orka/linalg.hpp"
#include "orka/onebit.hpp"
#include "orka/random.hpp"

namespace orka {

std::string_view to_string(ExperimentKind k) noexcept {
  switch (k) {
    case ExperimentKind::EqualitySystem: return "equality";
    case ExperimentKind::InequalitySystem: return "inequality";
    case ExperimentKind::LowRank: return "lowrank";
    case ExperimentKind::CompressedSensing: return "cs";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "equality" || lower == "equalitysystem") return ExperimentKind::EqualitySystem;
  if (lower == "inequality" || lower == "inequalitysystem") return ExperimentKind::InequalitySystem;
  if (lower == "lowrank" || lower == "low_rank") return ExperimentKind::LowRank;
  if (lower == "cs" || lower == "compressedsensing" || lower == "compressed_sensing") {
    return ExperimentKind::CompressedSensing;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown experiment kind '" + std::string(name) + "'");
}

DenseMatrix gen_gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw Error(ErrorKind::InvalidArgument, "matrix shape must be positive");
  Rng rng(seed);
  std::normal_distribution<double> normal;
  DenseMatrix a(rows, cols);
  for (double& v : a.data()) v = normal(rng);
  return a;
}

Vec gen_gaussian_vector(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal;
  Vec v(n);
  for (double& e : v) e = normal(rng);
  return v;
}

DenseMatrix gen_low_rank_target(std::size_t n1, std::size_t rank, std::uint64_t seed) {
  if (rank < 1 || rank > n1) throw Error(ErrorKind::InvalidArgument, "rank must lie in [1, n1]");
  const DenseMatrix k = gen_gaussian_matrix(n1, rank, seed);
  DenseMatrix x(n1, n1);
  // Fill the upper triangle and mirror it so X is exactly symmetric.
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = i; j < n1; ++j) {
      const double s = dot(k.row(i), k.row(j));
      x(i, j) = s;
      x(j, i) = s;
    }
  }
  return x;
}

Vec gen_sparse_target(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 1 || k > n) throw Error(ErrorKind::InvalidArgument, "sparsity must lie in [1, n]");
  Rng rng(seed);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::normal_distribution<double> normal;
  Vec x(n, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    double v = 0.0;
    while (v == 0.0) v = normal(rng);
    x[idx[i]] = v;
  }
  return x;
}

double nmse_vector(std::span<const double> x_star, std::span<const double> x_hat) {
  if (x_star.size() != x_hat.size()) throw Error(ErrorKind::DimensionMismatch, "NMSE operands differ in length");
  const double ref = squared_norm(x_star);
  if (ref == 0.0) throw Error(ErrorKind::ZeroReference, "reference signal is zero");
  double err = 0.0;
  for (std::size_t i = 0; i < x_star.size(); ++i) {
    const double d = x_star[i] - x_hat[i];
    err += d * d;
  }
  return err / ref;
}

double nmse_matrix(const DenseMatrix& x_star, const DenseMatrix& x_hat) {
  if (x_star.rows() != x_hat.rows() || x_star.cols() != x_hat.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "NMSE operands differ in shape");
  }
  return nmse_vector(x_star.data(), x_hat.data());
}

std::function<double(double)> gaussian_cdf(double mean, double sd) {
  if (!(sd > 0.0)) throw Error(ErrorKind::InvalidArgument, "standard deviation must be positive");
  return [mean, sd](double z) { return 0.5 * std::erfc(-(z - mean) / (sd * std::sqrt(2.0))); };
}

double one_bit_log_likelihood(const DenseMatrix& a, std::span<const double> r, std::span<const double> x,
                              const std::function<double(double)>& cdf, std::size_t* clamped) {
  if (r.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "sign vector length must equal rows");
  const Vec ax = multiply(a, x);
  constexpr double floor = 1e-300;
  std::size_t hits = 0;
  double ll = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    double p;
    if (r[i] == 1.0) {
      p = cdf(ax[i]);
    } else if (r[i] == -1.0) {
      p = 1.0 - cdf(ax[i]);
    } else {
      throw Error(ErrorKind::InvalidArgument, "sign entries must be +1 or -1");
    }
    if (!(p >= floor)) {
      p = floor;
      ++hits;
    }
    ll += std::log(p);
  }
  if (clamped != nullptr) *clamped = hits;
  return ll;
}

double default_ista_lambda(const DenseMatrix& a, std::span<const double> y) {
  const Vec aty = multiply(a.transpose(), y);
  double inf = 0.0;
  for (double v : aty) inf = std::max(inf, std::abs(v));
  return 1e-3 * inf;
}

double lasso_objective(const DenseMatrix& a, std::span<const double> y, std::span<const double> x,
                       double lambda) {
  const Vec ax = multiply(a, x);
  double fit = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) fit += (y[i] - ax[i]) * (y[i] - ax[i]);
  double l1 = 0.0;
  for (double v : x) l1 += std::abs(v);
  return 0.5 * fit + lambda * l1;
}

Vec ista_l1_baseline(const DenseMatrix& a, std::span<const double> y, double lambda_reg, std::size_t iters,
                     std::vector<double>* objective_trace) {
  if (!(lambda_reg > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda_reg must be positive");
  if (y.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "measurement length must equal rows");
  const double smax = singular_values(a).front();
  const double lip = smax * smax;
  if (lip == 0.0) return Vec(a.cols(), 0.0);
  const double step = 1.0 / lip;
  const double shrink = lambda_reg * step;
  const DenseMatrix at = a.transpose();

  Vec x(a.cols(), 0.0);
  Vec resid(a.rows());
  for (std::size_t it = 0; it < iters; ++it) {
    const Vec ax = multiply(a, x);
    for (std::size_t i = 0; i < resid.size(); ++i) resid[i] = y[i] - ax[i];
    const Vec g = multiply(at, resid);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double z = x[j] + step * g[j];
      x[j] = std::copysign(std::max(std::abs(z) - shrink, 0.0), z);
    }
    if (objective_trace != nullptr) objective_trace->push_back(lasso_objective(a, y, x, lambda_reg));
  }
  return x;
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("ORKA_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max<unsigned>(1, std::thread::hardware_concurrency());
}

namespace {

enum SeedRole : std::uint64_t { kMatrix = 1, kTarget = 2, kThresholds = 3, kSolver = 4 };

std::string method_label(const ExperimentSpec& spec) {
  std::string label(to_string(spec.solver.method));
  if (spec.adaptive) label += "+adaptive";
  return label;
}

TrialRecord run_trial(const ExperimentSpec& spec, std::size_t m, std::size_t trial) {
  TrialRecord rec;
  rec.method = method_label(spec);
  rec.m = m;
  rec.trial = trial;
  // The instance and threshold draws depend only on the trial, so the m grid
  // is nested (a larger m extends the same threshold sequences).
  rec.seed = mix_seed({spec.seed, trial});
  const std::uint64_t matrix_seed = mix_seed({spec.seed, 0, trial, kMatrix});
  const std::uint64_t target_seed = mix_seed({spec.seed, 0, trial, kTarget});
  const std::uint64_t threshold_seed = mix_seed({spec.seed, 0, trial, kThresholds});
  SolverConfig cfg = spec.solver;
  cfg.seed = mix_seed({spec.seed, m, trial, kSolver});

  const auto start = std::chrono::steady_clock::now();
  try {
    Vec x_true;
    switch (spec.kind) {
      case ExperimentKind::LowRank: {
        const auto n1 = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(spec.dim))));
        if (n1 * n1 != spec.dim) throw Error(ErrorKind::InvalidArgument, "low-rank dim must be a square");
        x_true = vectorize(gen_low_rank_target(n1, spec.rank_or_sparsity, target_seed));
        break;
      }
      case ExperimentKind::CompressedSensing:
        x_true = gen_sparse_target(spec.dim, spec.rank_or_sparsity, target_seed);
        break;
      case ExperimentKind::InequalitySystem:
      case ExperimentKind::EqualitySystem:
        x_true = gen_gaussian_vector(spec.dim, target_seed);
        break;
    }

    SolveReport rep;
    if (spec.kind == ExperimentKind::EqualitySystem) {
      DenseMatrix a = gen_gaussian_matrix(m * spec.n_rows, spec.dim, matrix_seed);
      Vec b = multiply(a, x_true);
      const auto p = FeasibilityProblem::uniform(std::move(a), std::move(b), RowSense::Equality, spec.n_rows);
      rep = solve(p, cfg, Vec(spec.dim, 0.0));
    } else {
      const DenseMatrix a = gen_gaussian_matrix(spec.n_rows, spec.dim, matrix_seed);
      const Vec y = multiply(a, x_true);
      if (spec.adaptive) {
        rep = adaptive_threshold_recover(a, y, m, cfg, spec.delta, spec.max_outer, threshold_seed,
                                         spec.threshold_mean)
                  .report;
      } else {
        rep = orka_recover(a, y, m, cfg, threshold_seed, spec.threshold_mean);
      }
    }
    rec.iterations = rep.iterations;
    if (spec.kind == ExperimentKind::LowRank) {
      const std::size_t n1 = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(spec.dim))));
      rec.nmse = nmse_matrix(unvectorize(x_true, n1, n1), unvectorize(rep.x, n1, n1));
    } else {
      rec.nmse = nmse_vector(x_true, rep.x);
    }
  } catch (const Error&) {
    rec.nmse = std::numeric_limits<double>::quiet_NaN();
  }
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace

std::vector<TrialRecord> run_trial_grid(const ExperimentSpec& spec, std::size_t threads) {
  if (spec.trials == 0) throw Error(ErrorKind::InvalidArgument, "trials must be at least 1");
  if (spec.m_list.empty()) throw Error(ErrorKind::InvalidArgument, "m_list must be non-empty");
  for (std::size_t m : spec.m_list) {
    if (m == 0) throw Error(ErrorKind::InvalidArgument, "m values must be positive");
  }
  std::vector<std::size_t> ms = spec.m_list;
  std::sort(ms.begin(), ms.end());

  const std::size_t cells = ms.size() * spec.trials;
  std::vector<TrialRecord> out(cells);
  const std::size_t workers = std::min(cells, threads == 0 ? default_thread_count() : threads);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cells; i = next++) {
      out[i] = run_trial(spec, ms[i / spec.trials], i % spec.trials);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return out;
}

std::vector<GridSummary> summarize(std::span<const TrialRecord> records) {
  std::map<std::size_t, GridSummary> by_m;
  for (const auto& r : records) {
    GridSummary& s = by_m[r.m];
    s.m = r.m;
    if (std::isnan(r.nmse)) {
      ++s.failed;
    } else {
      s.mean_nmse += r.nmse;
      ++s.ok;
    }
  }
  std::vector<GridSummary> out;
  for (auto& [m, s] : by_m) {
    if (s.ok > 0) s.mean_nmse /= static_cast<double>(s.ok);
    else s.mean_nmse = std::numeric_limits<double>::quiet_NaN();
    out.push_back(s);
  }
  return out;
}

}  // namespace orka
