#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "orka/experiments.hpp"
#include "orka/matrix.hpp"

namespace orka {

inline constexpr const char* kVersion = "0.1.0";

/// Reals at 17 significant digits, which round-trips every double.
std::string format_real(double v);

/// Matrix text format: header "rows cols", then rows*cols whitespace-separated
/// reals in row-major order. Lines starting with '#' before the header are
/// skipped. Throws ParseError (with line number) or DimensionMismatch.
DenseMatrix parse_matrix(const std::string& text);
DenseMatrix load_matrix_file(const std::filesystem::path& path);

std::string format_matrix(const DenseMatrix& a, const std::string& comment = {});
void write_matrix_file(const DenseMatrix& a, const std::filesystem::path& path, const std::string& comment = {});

/// Trial CSV: optional "# ..." comment line, header
/// method,m,trial,seed,iterations,nmse,wall_time_s and rows sorted by
/// (method, m, trial). Failed trials have an empty nmse field; wall times are
/// written only when `with_wall_time` is set.
std::string format_trial_csv(std::span<const TrialRecord> records, const std::string& comment = {},
                             bool with_wall_time = true);
void write_trial_csv(std::span<const TrialRecord> records, const std::filesystem::path& path,
                     const std::string& comment = {}, bool with_wall_time = true);

/// Writes `content` to `path` via a temporary file and rename.
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// FNV-1a 64-bit hash, stable across platforms.
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// "# orka version=... config_hash=... seed=..."
std::string manifest_line(std::uint64_t config_hash, std::uint64_t seed);

}  // namespace orka
