#include <cmath>
#include <filesystem>
#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "doctest.h"
#include "orka/config.hpp"
#include "orka/io.hpp"
#include "support.hpp"

using namespace orka;
using orka::test::error_kind;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  const fs::path p = ORKA_TEST_TMPDIR;
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

const char* kValidConfig =
    "# rank-1 grid\n"
    "kind = lowrank\n"
    "n_rows = 200\n"
    "dim = 25\n"
    "rank_or_sparsity = 1\n"
    "m_list = 10, 20,30\n"
    "trials = 15\n"
    "method = BlockSKM\n"
    "max_iters = 20000   # per trial\n"
    "seed = 42\n"
    "output = grid.csv\n";

}  // namespace

TEST_CASE("format_real round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(format_real(v)) == v);
}

TEST_CASE("parse_matrix") {
  const DenseMatrix a = parse_matrix("1 1\n3.5");
  CHECK(a == DenseMatrix{{3.5}});
  CHECK(parse_matrix("# produced elsewhere\n2 3\n1 2 3\n4 5 6\n") == DenseMatrix{{1, 2, 3}, {4, 5, 6}});

  const std::string short_msg = error_message([] { parse_matrix("2 2\n1 2\n3\n"); });
  CHECK(error_kind([] { parse_matrix("2 2\n1 2\n3\n"); }) == ErrorKind::DimensionMismatch);
  CHECK(short_msg.find("line 3") != std::string::npos);

  CHECK(error_kind([] { parse_matrix("2 2\n1 x\n3 4\n"); }) == ErrorKind::ParseError);
  CHECK(error_message([] { parse_matrix("2 2\n1 x\n3 4\n"); }).find("line 2") != std::string::npos);
  CHECK(error_kind([] { parse_matrix("two 2\n"); }) == ErrorKind::ParseError);
  CHECK(error_kind([] { parse_matrix(""); }) == ErrorKind::ParseError);
  CHECK(error_kind([] { parse_matrix("1 2\n1 2 3\n"); }) == ErrorKind::DimensionMismatch);
  CHECK(error_kind([] { parse_matrix("1 1\nnan\n"); }) != std::nullopt);
}

TEST_CASE("matrix files round-trip bit-exactly") {
  const DenseMatrix a = gen_gaussian_matrix(10, 10, 3);
  const fs::path p = tmp_dir() / "m.txt";
  write_matrix_file(a, p, "# orka test");
  CHECK(load_matrix_file(p) == a);
  CHECK(slurp(p).rfind("# orka test\n10 10\n", 0) == 0);
  CHECK(error_kind([] { load_matrix_file("/nonexistent/dir/m.txt"); }) == ErrorKind::IoError);
}

TEST_CASE("trial CSV") {
  CHECK(format_trial_csv({}) == "method,m,trial,seed,iterations,nmse,wall_time_s\n");

  std::vector<TrialRecord> recs(3);
  recs[0] = {"SKM", 2, 0, 9, 10, 0.25, 1.5};
  recs[1] = {"PrSKM", 2, 1, 8, 11, std::nan(""), 0.5};
  recs[2] = {"PrSKM", 1, 0, 7, 12, 0.125, 0.25};
  const std::string csv = format_trial_csv(recs, "# note");
  CHECK(csv ==
        "# note\n"
        "method,m,trial,seed,iterations,nmse,wall_time_s\n"
        "PrSKM,1,0,7,12,0.125,0.25\n"
        "PrSKM,2,1,8,11,,0.5\n"
        "SKM,2,0,9,10,0.25,1.5\n");
  const std::string no_time = format_trial_csv(recs, {}, false);
  CHECK(no_time.find("PrSKM,1,0,7,12,0.125,\n") != std::string::npos);

  std::vector<TrialRecord> ninety(90);
  for (std::size_t i = 0; i < 90; ++i) ninety[i] = {"BlockSKM", 10 * (1 + i / 15), i % 15, i, 1, 0.5, 0.0};
  const fs::path p = tmp_dir() / "grid.csv";
  write_trial_csv(ninety, p);
  const std::string body = slurp(p);
  CHECK(std::count(body.begin(), body.end(), '\n') == 91);
  CHECK(error_kind([&] { write_trial_csv(ninety, "/nonexistent/dir/x.csv"); }) == ErrorKind::IoError);
}

TEST_CASE("manifest and hashing") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  const std::string line = manifest_line(0xabcull, 7);
  CHECK(line == std::string("# orka version=") + kVersion + " config_hash=0000000000000abc seed=7");
}

TEST_CASE("parse_run_config") {
  const RunConfig cfg = parse_run_config(kValidConfig);
  CHECK(cfg.spec.kind == ExperimentKind::LowRank);
  CHECK(cfg.spec.n_rows == 200);
  CHECK(cfg.spec.dim == 25);
  CHECK(cfg.spec.m_list == std::vector<std::size_t>{10, 20, 30});
  CHECK(cfg.spec.trials == 15);
  CHECK(cfg.spec.solver.method == Method::BlockSKM);
  CHECK(cfg.spec.solver.max_iters == 20000);
  CHECK(cfg.spec.seed == 42);
  CHECK(cfg.output == "grid.csv");
  CHECK_FALSE(cfg.report_wall_time);
  CHECK(cfg.hash() == parse_run_config(kValidConfig).hash());
  CHECK(cfg.hash() != parse_run_config(std::string(kValidConfig) + "lambda = 0.5\n").hash());

  const RunConfig opt = parse_run_config(std::string(kValidConfig) +
                                         "lambda = 1.5\ngamma = 30\nblock_k = 4\ntol = 1e-8\nadaptive = true\n"
                                         "delta = 1e-4\nmax_outer = 7\nthreshold_mean = 0.5\nreport_wall_time = yes\n");
  CHECK(opt.spec.solver.lambda == 1.5);
  CHECK(opt.spec.solver.gamma == 30);
  CHECK(opt.spec.solver.block_k == 4);
  CHECK(opt.spec.solver.tol == 1e-8);
  CHECK(opt.spec.adaptive);
  CHECK(opt.spec.delta == 1e-4);
  CHECK(opt.spec.max_outer == 7);
  CHECK(opt.spec.threshold_mean == 0.5);
  CHECK(opt.report_wall_time);
}

TEST_CASE("config errors name the key") {
  auto without = [](const std::string& key) {
    std::istringstream in(kValidConfig);
    std::string line, out;
    while (std::getline(in, line))
      if (line.rfind(key + " ", 0) != 0) out += line + "\n";
    return out;
  };
  for (const char* key : {"trials", "kind", "m_list", "output", "seed"}) {
    const std::string msg = error_message([&] { parse_run_config(without(key)); });
    CHECK(msg.find(std::string("'") + key + "'") != std::string::npos);
  }
  const std::pair<std::string, std::string> cases[] = {
      {"colour = red\n", "colour"},          {"trials = 3\n", "trials"},     {"lambda = 2\n", "lambda"},
      {"block_k = 25\n", "block_k"},         {"adaptive = maybe\n", "adaptive"}, {"delta = -1\n", "delta"},
      {"gamma = 100000\n", "gamma"},        {"tol = abc\n", "tol"},
  };
  for (const auto& [extra, key] : cases) {
    const std::string text = std::string(kValidConfig) + extra;
    CHECK(error_kind([&] { parse_run_config(text); }) == ErrorKind::ConfigError);
    CHECK(error_message([&] { parse_run_config(text); }).find("'" + key + "'") != std::string::npos);
  }
  std::string bad_dim = kValidConfig;
  bad_dim.replace(bad_dim.find("dim = 25"), 8, "dim = 24");
  CHECK(error_message([&] { parse_run_config(bad_dim); }).find("'dim'") != std::string::npos);
  std::string bad_kind = kValidConfig;
  bad_kind.replace(bad_kind.find("lowrank"), 7, "spiral");
  CHECK(error_message([&] { parse_run_config(bad_kind); }).find("'kind'") != std::string::npos);
  std::string bad_trials = kValidConfig;
  bad_trials.replace(bad_trials.find("trials = 15"), 11, "trials = 0");
  CHECK(error_message([&] { parse_run_config(bad_trials); }).find("'trials'") != std::string::npos);
  CHECK(error_kind([] { parse_run_config("just words\n"); }) == ErrorKind::ConfigError);
  CHECK(error_kind([] { load_run_config("/nonexistent.cfg"); }) == ErrorKind::ConfigError);
}

TEST_CASE("shipped configs parse") {
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(ORKA_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_run_config(entry.path()));
    ++n;
  }
  CHECK(n >= 4);
}
