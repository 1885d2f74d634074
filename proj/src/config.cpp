#include "orka/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "orka/error.hpp"
#include "orka/io.hpp"

namespace orka {

namespace {

constexpr std::array<std::string_view, 10> kRequired = {
    "kind", "n_rows", "dim", "rank_or_sparsity", "m_list", "trials", "method", "max_iters", "seed", "output"};
constexpr std::array<std::string_view, 9> kOptional = {
    "lambda", "gamma", "block_k", "tol", "adaptive", "delta", "max_outer", "threshold_mean", "report_wall_time"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorKind::ConfigError, "key '" + key + "': " + why);
}

std::uint64_t as_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad(key, "expected a non-negative integer, got '" + v + "'");
  return out;
}

std::size_t as_positive(const std::string& key, const std::string& v) {
  const auto n = as_u64(key, v);
  if (n == 0) bad(key, "must be positive");
  return static_cast<std::size_t>(n);
}

double as_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad(key, "expected a real number, got '" + v + "'");
  return out;
}

bool as_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key, "expected true/false, got '" + v + "'");
}

}  // namespace

std::uint64_t RunConfig::hash() const {
  std::string canon;
  for (const auto& [k, v] : entries) canon += k + "=" + v + "\n";
  return fnv1a64(canon);
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const bool known = std::find(kRequired.begin(), kRequired.end(), key) != kRequired.end() ||
                       std::find(kOptional.begin(), kOptional.end(), key) != kOptional.end();
    if (!known) bad(key, "unknown key");
    if (value.empty()) bad(key, "empty value");
    if (!cfg.entries.emplace(key, value).second) bad(key, "duplicate key");
  }
  for (std::string_view req : kRequired) {
    if (!cfg.entries.contains(std::string(req))) bad(std::string(req), "missing required key");
  }

  const auto& e = cfg.entries;
  auto get = [&](const char* k) -> const std::string& { return e.at(k); };
  ExperimentSpec& s = cfg.spec;
  try {
    s.kind = parse_experiment_kind(get("kind"));
  } catch (const Error&) {
    bad("kind", "unknown experiment kind '" + get("kind") + "'");
  }
  s.n_rows = as_positive("n_rows", get("n_rows"));
  s.dim = as_positive("dim", get("dim"));
  s.rank_or_sparsity = as_positive("rank_or_sparsity", get("rank_or_sparsity"));
  s.trials = as_positive("trials", get("trials"));
  s.seed = as_u64("seed", get("seed"));
  s.m_list.clear();
  {
    std::string item;
    std::istringstream ms(get("m_list"));
    while (std::getline(ms, item, ',')) s.m_list.push_back(as_positive("m_list", trim(item)));
    if (s.m_list.empty()) bad("m_list", "must list at least one value");
  }
  try {
    s.solver.method = parse_method(get("method"));
  } catch (const Error&) {
    bad("method", "unknown method '" + get("method") + "'");
  }
  s.solver.max_iters = as_positive("max_iters", get("max_iters"));
  cfg.output = get("output");

  if (e.contains("lambda")) {
    s.solver.lambda = as_real("lambda", e.at("lambda"));
    if (!(s.solver.lambda > 0.0 && s.solver.lambda < 2.0)) bad("lambda", "must lie in (0, 2)");
  }
  if (e.contains("gamma")) s.solver.gamma = as_positive("gamma", e.at("gamma"));
  if (e.contains("block_k")) s.solver.block_k = as_positive("block_k", e.at("block_k"));
  if (e.contains("tol")) {
    s.solver.tol = as_real("tol", e.at("tol"));
    if (!(s.solver.tol >= 0.0)) bad("tol", "must be non-negative");
  }
  if (e.contains("adaptive")) s.adaptive = as_bool("adaptive", e.at("adaptive"));
  if (e.contains("delta")) {
    s.delta = as_real("delta", e.at("delta"));
    if (!(s.delta > 0.0)) bad("delta", "must be positive");
  }
  if (e.contains("max_outer")) s.max_outer = as_positive("max_outer", e.at("max_outer"));
  if (e.contains("threshold_mean")) s.threshold_mean = as_real("threshold_mean", e.at("threshold_mean"));
  if (e.contains("report_wall_time")) cfg.report_wall_time = as_bool("report_wall_time", e.at("report_wall_time"));

  // Shape checks that would otherwise only fail inside a trial.
  if (s.kind == ExperimentKind::LowRank) {
    std::size_t n1 = 1;
    while (n1 * n1 < s.dim) ++n1;
    if (n1 * n1 != s.dim) bad("dim", "low-rank targets need a square dimension");
    if (s.rank_or_sparsity > n1) bad("rank_or_sparsity", "rank exceeds the matrix side");
  } else if (s.rank_or_sparsity > s.dim) {
    bad("rank_or_sparsity", "sparsity exceeds dim");
  }
  if (s.solver.gamma != 0 && s.kind != ExperimentKind::EqualitySystem) {
    for (std::size_t m : s.m_list) {
      if (s.solver.gamma > m * s.n_rows) bad("gamma", "exceeds the number of rows for m = " + std::to_string(m));
    }
  }
  if (s.solver.method == Method::BlockSKM && s.solver.block_k != 0 && s.solver.block_k >= s.dim) {
    bad("block_k", "must be smaller than dim");
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace orka
