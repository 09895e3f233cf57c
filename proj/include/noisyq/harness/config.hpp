#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "noisyq/trainer.hpp"

namespace noisyq::harness {

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::nrowan;
  EnvKind environment = EnvKind::cartpole;
  std::vector<std::uint64_t> seeds;
  AgentConfig agent = AgentConfig::defaults(EnvKind::cartpole);
  std::filesystem::path output_dir;

  void validate() const;
};

/// Accepts comma-separated seeds and inclusive ranges, e.g. "1,2,7-9".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

/// Sets one AgentConfig field by its key-file name (e.g. "k_final", "lr").
/// Throws ConfigError naming the key on unknown keys or unparsable values.
void apply_override(AgentConfig& config, std::string_view key, std::string_view value);

/// `key = value` lines; blank lines and '#' comments are ignored.
std::map<std::string, std::string> parse_key_value(std::istream& in);

/// Builds an experiment from a key-value file. Besides AgentConfig keys it
/// understands algo, env, seeds and out; env-specific defaults are applied
/// before any explicit agent keys.
ExperimentConfig load_experiment_config(const std::filesystem::path& file);

/// Same as load_experiment_config but from an already-parsed map.
ExperimentConfig experiment_from_map(const std::map<std::string, std::string>& entries);

/// $NOISYQ_OUT if set, otherwise "runs".
std::filesystem::path default_output_root();

}  // namespace noisyq::harness
