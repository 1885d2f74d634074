#include "orka/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "orka/analysis.hpp"
#include "orka/config.hpp"
#include "orka/error.hpp"
#include "orka/experiments.hpp"
#include "orka/feasibility.hpp"
#include "orka/io.hpp"
#include "orka/onebit.hpp"
#include "orka/random.hpp"

namespace orka {

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeFailure = 1;
constexpr int kUsage = 2;

// Input problems detected before any computation.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverFlags {
  std::string method = "BlockSKM";
  double lambda = 1.0;
  std::size_t gamma = 0;
  std::size_t block_k = 0;
  std::size_t max_iters = 100000;
  double tol = 1e-10;
  std::uint64_t seed = 0;

  void attach(CLI::App& app) {
    app.add_option("--method", method, "RKA, SKM, PrSKM or BlockSKM")->capture_default_str();
    app.add_option("--lambda", lambda, "relaxation in (0,2)")->capture_default_str();
    app.add_option("--gamma", gamma, "Motzkin sample size (0 = rows/10)")->capture_default_str();
    app.add_option("--block-k", block_k, "rows kept per block step (0 = d/2)")->capture_default_str();
    app.add_option("--max-iters", max_iters, "iteration budget")->capture_default_str();
    app.add_option("--tol", tol, "residual tolerance")->capture_default_str();
    app.add_option("--seed", seed, "random seed")->capture_default_str();
  }

  SolverConfig to_config() const {
    SolverConfig cfg;
    try {
      cfg.method = parse_method(method);
    } catch (const Error& e) {
      throw InputError(std::string("--method: ") + e.what());
    }
    if (!(lambda > 0.0 && lambda < 2.0)) throw InputError("--lambda: must lie in (0, 2)");
    if (max_iters == 0) throw InputError("--max-iters: must be positive");
    if (!(tol >= 0.0)) throw InputError("--tol: must be non-negative");
    cfg.lambda = lambda;
    cfg.gamma = gamma;
    cfg.block_k = block_k;
    cfg.max_iters = max_iters;
    cfg.tol = tol;
    cfg.seed = seed;
    return cfg;
  }
};

DenseMatrix load_input(const std::string& flag, const std::string& path) {
  try {
    return load_matrix_file(path);
  } catch (const Error& e) {
    throw InputError(flag + " " + path + ": " + e.what());
  }
}

Vec as_vector(const std::string& flag, const DenseMatrix& m) {
  if (m.cols() != 1 && m.rows() != 1) throw InputError(flag + ": expected a single row or column");
  return {m.data().begin(), m.data().end()};
}

std::vector<RowSense> load_senses(const std::string& path, std::size_t rows) {
  std::ifstream in(path);
  if (!in) throw InputError("--senses: cannot open " + path);
  std::vector<RowSense> senses;
  std::string tok;
  while (in >> tok) {
    if (tok == "=" || tok == "E" || tok == "eq") senses.push_back(RowSense::Equality);
    else if (tok == "<=" || tok == "L" || tok == "le") senses.push_back(RowSense::LessEq);
    else if (tok == ">=" || tok == "G" || tok == "ge") throw InputError("--senses: negate >= rows into <= form");
    else throw InputError("--senses: unknown token '" + tok + "'");
  }
  if (senses.size() != rows) throw InputError("--senses: expected " + std::to_string(rows) + " entries");
  return senses;
}

std::string args_fingerprint(int argc, const char* const* argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) s += std::string(argv[i]) + '\x1f';
  return s;
}

std::string history_csv(const SolveReport& rep, const std::string& manifest) {
  std::string s = manifest + "\nsample,residual\n";
  for (std::size_t i = 0; i < rep.residual_history.size(); ++i) {
    s += std::to_string(i) + ',' + format_real(rep.residual_history[i]) + '\n';
  }
  return s;
}

void print_report(std::ostream& out, const SolveReport& rep) {
  out << "method=" << to_string(rep.method) << '\n'
      << "iterations=" << rep.iterations << '\n'
      << "converged=" << (rep.converged ? "true" : "false") << '\n'
      << "final_residual=" << format_real(rep.residual_history.back()) << '\n'
      << "wall_time_s=" << format_real(rep.wall_time_s) << '\n';
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"One-bit signal recovery with accelerated randomized Kaczmarz solvers", "orka"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve a linear feasibility problem from matrix files");
  std::string c_path, b_path, senses_path, x0_path, out_path, history_path;
  bool all_equality = false;
  std::size_t block_rows = 1;
  SolverFlags solve_flags;
  solve_cmd->add_option("--matrix", c_path, "constraint matrix C")->required();
  solve_cmd->add_option("--rhs", b_path, "right-hand side b (m x 1)")->required();
  solve_cmd->add_option("--senses", senses_path, "per-row '<=' or '=' tokens (default: all <=)");
  solve_cmd->add_flag("--equality", all_equality, "treat every row as an equality");
  solve_cmd->add_option("--block-rows", block_rows, "rows per block for BlockSKM")->capture_default_str();
  solve_cmd->add_option("--x0", x0_path, "initial iterate (default: zero)");
  solve_cmd->add_option("--out", out_path, "write the solution here")->required();
  solve_cmd->add_option("--history", history_path, "write the residual history CSV here");
  solve_flags.attach(*solve_cmd);

  // orka
  auto* orka_cmd = app.add_subcommand("orka", "recover a signal from one-bit samples with random thresholds");
  std::string a_path, signal_path, y_path, orka_out;
  std::size_t m = 10;
  bool adaptive = false;
  double delta = 1e-6;
  std::size_t max_outer = 20;
  double threshold_mean = 0.0;
  SolverFlags orka_flags;
  orka_cmd->add_option("--matrix", a_path, "measurement matrix A (n x d)")->required();
  auto* sig = orka_cmd->add_option("--signal", signal_path, "ground-truth x (measurements y = A x)");
  auto* meas = orka_cmd->add_option("--measurements", y_path, "measurements y (n x 1)");
  sig->excludes(meas);
  orka_cmd->add_option("--m", m, "number of threshold sequences")->capture_default_str()->check(CLI::PositiveNumber);
  orka_cmd->add_flag("--adaptive", adaptive, "use adaptive thresholding");
  orka_cmd->add_option("--delta", delta, "adaptive stop threshold")->capture_default_str();
  orka_cmd->add_option("--max-outer", max_outer, "adaptive outer iterations")->capture_default_str();
  orka_cmd->add_option("--threshold-mean", threshold_mean, "threshold mean")->capture_default_str();
  orka_cmd->add_option("--out", orka_out, "write the recovered signal here")->required();
  orka_flags.attach(*orka_cmd);

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "run a trial grid from a key = value config");
  std::string config_path, output_override;
  std::size_t threads = 0;
  exp_cmd->add_option("--config", config_path, "config file")->required();
  exp_cmd->add_option("--output", output_override, "override the config's output path");
  exp_cmd->add_option("--threads", threads, "worker threads (default: ORKA_THREADS or all cores)");

  // penalty
  auto* pen_cmd = app.add_subcommand("penalty", "evaluate the sample-size penalty and related bounds");
  double mu1 = 0, mu2 = 0, t = 0, pen_m = 0;
  std::optional<double> kappa, chernoff_a;
  std::optional<std::size_t> m_prime;
  double pen_lambda = 1.0, h0 = 1.0;
  std::size_t iter = 0;
  pen_cmd->add_option("--mu1", mu1, "first moment of the distances")->required();
  pen_cmd->add_option("--mu2", mu2, "second moment of the distances")->required();
  pen_cmd->add_option("--t", t, "MGF argument t > 0")->required();
  pen_cmd->add_option("--m", pen_m, "number of threshold sequences")->required();
  pen_cmd->add_option("--kappa", kappa, "scaled condition number of A (enables the augmented bound)");
  pen_cmd->add_option("--lambda", pen_lambda, "relaxation for the augmented bound")->capture_default_str();
  pen_cmd->add_option("--iter", iter, "iteration index for the augmented bound")->capture_default_str();
  pen_cmd->add_option("--h0", h0, "initial squared distance for the augmented bound")->capture_default_str();
  pen_cmd->add_option("--chernoff-a", chernoff_a, "evaluate the Chernoff lower bound at this level");
  pen_cmd->add_option("--m-prime", m_prime, "sample count m' for the Chernoff bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  const std::uint64_t arg_hash = fnv1a64(args_fingerprint(argc, argv));

  try {
    if (solve_cmd->parsed()) {
      SolverConfig cfg;
      std::optional<FeasibilityProblem> problem;
      Vec x0;
      try {
        cfg = solve_flags.to_config();
        DenseMatrix c = load_input("--matrix", c_path);
        Vec b = as_vector("--rhs", load_input("--rhs", b_path));
        if (b.size() != c.rows()) throw InputError("--rhs: length does not match the matrix rows");
        std::vector<RowSense> senses(c.rows(), all_equality ? RowSense::Equality : RowSense::LessEq);
        if (!senses_path.empty()) senses = load_senses(senses_path, c.rows());
        x0.assign(c.cols(), 0.0);
        if (!x0_path.empty()) {
          x0 = as_vector("--x0", load_input("--x0", x0_path));
          if (x0.size() != c.cols()) throw InputError("--x0: length does not match the matrix columns");
        }
        problem.emplace(std::move(c), std::move(b), std::move(senses), block_rows);
      } catch (const Error& e) {
        throw InputError(e.what());
      }
      const SolveReport rep = solve(*problem, cfg, x0);
      const std::string manifest = manifest_line(arg_hash, cfg.seed);
      write_matrix_file(DenseMatrix::column(rep.x), out_path, manifest);
      if (!history_path.empty()) write_text_file(history_path, history_csv(rep, manifest));
      print_report(out, rep);
      return rep.converged ? kOk : kRuntimeFailure;
    }

    if (orka_cmd->parsed()) {
      SolverConfig cfg;
      DenseMatrix a;
      Vec y, x_true;
      try {
        cfg = orka_flags.to_config();
        cfg.seed = mix_seed({orka_flags.seed, 1});
        a = load_input("--matrix", a_path);
        if (!signal_path.empty()) {
          x_true = as_vector("--signal", load_input("--signal", signal_path));
          if (x_true.size() != a.cols()) throw InputError("--signal: length does not match the matrix columns");
          y = multiply(a, x_true);
        } else if (!y_path.empty()) {
          y = as_vector("--measurements", load_input("--measurements", y_path));
          if (y.size() != a.rows()) throw InputError("--measurements: length does not match the matrix rows");
        } else {
          throw InputError("one of --signal or --measurements is required");
        }
        if (adaptive && !(delta > 0.0)) throw InputError("--delta: must be positive");
        if (adaptive && max_outer == 0) throw InputError("--max-outer: must be positive");
      } catch (const Error& e) {
        throw InputError(e.what());
      }
      SolveReport rep;
      if (adaptive) {
        const AdaptiveResult res =
            adaptive_threshold_recover(a, y, m, cfg, delta, max_outer, orka_flags.seed, threshold_mean);
        rep = res.report;
        out << "outer_iterations=" << res.outer_iterations << '\n'
            << "thresholds_converged=" << (res.thresholds_converged ? "true" : "false") << '\n';
      } else {
        rep = orka_recover(a, y, m, cfg, orka_flags.seed, threshold_mean);
      }
      write_matrix_file(DenseMatrix::column(rep.x), orka_out, manifest_line(arg_hash, orka_flags.seed));
      print_report(out, rep);
      out << "rows=" << m * a.rows() << '\n';
      if (!x_true.empty()) out << "nmse=" << format_real(nmse_vector(x_true, rep.x)) << '\n';
      return kOk;
    }

    if (exp_cmd->parsed()) {
      RunConfig cfg;
      try {
        cfg = load_run_config(config_path);
      } catch (const Error& e) {
        throw InputError(e.what());
      }
      if (!output_override.empty()) cfg.output = output_override;
      const auto records = run_trial_grid(cfg.spec, threads);
      write_trial_csv(records, cfg.output, manifest_line(cfg.hash(), cfg.spec.seed), cfg.report_wall_time);
      out << "m,mean_nmse,ok,failed\n";
      for (const auto& s : summarize(records)) {
        out << s.m << ',' << format_real(s.mean_nmse) << ',' << s.ok << ',' << s.failed << '\n';
      }
      out << "wrote " << records.size() << " records to " << cfg.output.string() << '\n';
      return kOk;
    }

    if (pen_cmd->parsed()) {
      PenaltyModel model;
      try {
        if (!(t > 0.0)) throw InputError("--t: must be positive");
        if (!(pen_m >= 1.0)) throw InputError("--m: must be at least 1");
        if (chernoff_a.has_value() != m_prime.has_value()) {
          throw InputError("--chernoff-a and --m-prime must be given together");
        }
        model = pade_penalty_coefficients(mu1, mu2, t);
      } catch (const Error& e) {
        throw InputError(e.what());
      }
      out << "u=" << format_real(model.u) << '\n'
          << "v=" << format_real(model.v) << '\n'
          << "a0=" << format_real(model.a0) << '\n'
          << "a1=" << format_real(model.a1) << '\n'
          << "b0=" << format_real(model.b0) << '\n'
          << "b1=" << format_real(model.b1) << '\n'
          << "upsilon=" << format_real(penalty_value(model, pen_m)) << '\n';
      if (kappa) {
        out << "augmented_bound=" << format_real(augmented_convergence_bound(*kappa, pen_lambda, iter, h0, model, pen_m))
            << '\n';
      }
      if (chernoff_a) {
        const std::vector<double> mu{mu1, mu2};
        out << "chernoff_lower_bound="
            << format_real(chernoff_lower_bound(mu, *m_prime, *chernoff_a, default_t_grid())) << '\n';
      }
      return kOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsage;
}

}  // namespace orka
