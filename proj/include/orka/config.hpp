#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "orka/experiments.hpp"

namespace orka {

/// Parsed `key = value` experiment configuration.
struct RunConfig {
  ExperimentSpec spec;
  std::filesystem::path output;
  bool report_wall_time = false;
  /// Canonical key/value pairs, used for hashing.
  std::map<std::string, std::string> entries;

  std::uint64_t hash() const;
};

/// Parses flat `key = value` lines; '#' starts a comment. Unknown, duplicate,
/// missing or malformed keys raise ConfigError naming the key.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace orka
