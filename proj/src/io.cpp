#include "orka/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "orka/error.hpp"

namespace orka {

std::string format_real(double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

namespace {

bool parse_size(std::string_view tok, std::size_t& out) {
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_double(std::string_view tok, double& out) {
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) toks.push_back(line.substr(start, i - start));
  }
  return toks;
}

}  // namespace

DenseMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty() || toks.front().starts_with('#')) continue;
    if (toks.size() != 2 || !parse_size(toks[0], rows) || !parse_size(toks[1], cols) || rows == 0 ||
        cols == 0) {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(lineno) + ": expected header \"rows cols\" with positive integers");
    }
    have_header = true;
    break;
  }
  if (!have_header) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno + 1) + ": missing header");

  const std::size_t expected = rows * cols;
  std::vector<double> data;
  data.reserve(expected);
  while (std::getline(in, line)) {
    ++lineno;
    for (auto tok : split_ws(line)) {
      double v = 0.0;
      if (!parse_double(tok, v)) {
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(lineno) + ": cannot parse '" + std::string(tok) + "' as a real");
      }
      if (data.size() == expected) {
        throw Error(ErrorKind::DimensionMismatch,
                    "line " + std::to_string(lineno) + ": more values than the header's " +
                        std::to_string(rows) + "x" + std::to_string(cols));
      }
      data.push_back(v);
    }
  }
  if (data.size() != expected) {
    throw Error(ErrorKind::DimensionMismatch,
                "line " + std::to_string(lineno) + ": found " + std::to_string(data.size()) +
                    " values, header declares " + std::to_string(expected));
  }
  try {
    return DenseMatrix(rows, cols, std::move(data));
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

DenseMatrix load_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix(ss.str());
}

std::string format_matrix(const DenseMatrix& a, const std::string& comment) {
  std::string out;
  if (!comment.empty()) out += comment + "\n";
  out += std::to_string(a.rows()) + " " + std::to_string(a.cols()) + "\n";
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (c > 0) out += ' ';
      out += format_real(a(r, c));
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw Error(ErrorKind::IoError, "write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot move output into " + path.string() + ": " + ec.message());
}

void write_matrix_file(const DenseMatrix& a, const std::filesystem::path& path, const std::string& comment) {
  write_text_file(path, format_matrix(a, comment));
}

std::string format_trial_csv(std::span<const TrialRecord> records, const std::string& comment,
                             bool with_wall_time) {
  std::vector<const TrialRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const TrialRecord* a, const TrialRecord* b) {
    if (a->method != b->method) return a->method < b->method;
    if (a->m != b->m) return a->m < b->m;
    return a->trial < b->trial;
  });

  std::string out;
  if (!comment.empty()) out += comment + "\n";
  out += "method,m,trial,seed,iterations,nmse,wall_time_s\n";
  for (const TrialRecord* r : sorted) {
    out += r->method + ',' + std::to_string(r->m) + ',' + std::to_string(r->trial) + ',' +
           std::to_string(r->seed) + ',' + std::to_string(r->iterations) + ',';
    if (!std::isnan(r->nmse)) out += format_real(r->nmse);
    out += ',';
    if (with_wall_time) out += format_real(r->wall_time_s);
    out += '\n';
  }
  return out;
}

void write_trial_csv(std::span<const TrialRecord> records, const std::filesystem::path& path,
                     const std::string& comment, bool with_wall_time) {
  write_text_file(path, format_trial_csv(records, comment, with_wall_time));
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string manifest_line(std::uint64_t config_hash, std::uint64_t seed) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash));
  return std::string("# orka version=") + kVersion + " config_hash=" + hash + " seed=" + std::to_string(seed);
}

}  // namespace orka
