#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "commaware/engine.hpp"

namespace commaware {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw `section.key -> values` pairs from a TOML-style file. Scalars are
/// stored as one-element lists; quotes are stripped.
using ConfigValues = std::map<std::string, std::vector<std::string>>;

/// Parses:
///   # comment
///   [section]
///   key = value | "string" | [v1, v2, ...]
/// Throws ConfigError with the line number on malformed input.
ConfigValues parse_config_text(std::string_view text);

/// Command-line values that replace file values when present.
struct ConfigOverrides {
  std::optional<std::vector<std::string>> strategies;
  std::optional<std::vector<std::string>> planners;
  std::optional<std::vector<std::string>> env_kinds;
  std::optional<std::vector<double>> r_c;
  std::optional<std::vector<double>> r_f;
  std::optional<int> replicates;
  std::optional<std::uint64_t> seed;
  std::optional<Timestep> t_max;
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<std::string> trace_dir;
};

struct ExperimentSpec {
  std::vector<SimConfig> configs;  // strategy x planner x env_kind x r_c x r_f
  int replicates = 20;
  std::uint64_t master_seed = 0;
  std::string out = "results.csv";
  int workers = 1;
  std::optional<std::string> trace_dir;
};

/// Builds and validates the experiment. Unknown keys and out-of-range values
/// raise ConfigError naming the key. `fallback_seed` applies when neither
/// the file nor the overrides set a seed.
ExperimentSpec build_spec(const ConfigValues& values, const ConfigOverrides& overrides,
                          std::optional<std::uint64_t> fallback_seed = std::nullopt);

/// Reads `path` (ConfigError if unreadable) and calls build_spec.
ExperimentSpec parse_config(const std::filesystem::path& path, const ConfigOverrides& overrides,
                            std::optional<std::uint64_t> fallback_seed = std::nullopt);

/// Splits "a,b, c" into trimmed items.
std::vector<std::string> split_list(std::string_view text);

}  // namespace commaware
