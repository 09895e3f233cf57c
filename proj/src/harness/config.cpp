#include "noisyq/harness/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

namespace noisyq::harness {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double to_real(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size())
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(text) + "'");
  return v;
}

long to_count(std::string_view key, std::string_view text) {
  text = trim(text);
  long v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size())
    throw ConfigError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
  return v;
}

std::uint64_t to_seed(std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size())
    throw ConfigError("seeds", "invalid seed '" + std::string(text) + "'");
  return v;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw ConfigError("seeds", "at least one seed is required");
  agent.validate();
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  while (!trim(text).empty()) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      seeds.push_back(to_seed(item));
      continue;
    }
    const std::uint64_t lo = to_seed(item.substr(0, dash));
    const std::uint64_t hi = to_seed(item.substr(dash + 1));
    if (hi < lo) throw ConfigError("seeds", "descending range '" + std::string(item) + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

void apply_override(AgentConfig& c, std::string_view key, std::string_view value) {
  const std::string k(key);
  if (k == "gamma") c.gamma = to_real(k, value);
  else if (k == "lr" || k == "learning_rate") c.learning_rate = to_real(k, value);
  else if (k == "adam_beta1") c.adam_beta1 = to_real(k, value);
  else if (k == "adam_beta2") c.adam_beta2 = to_real(k, value);
  else if (k == "adam_epsilon") c.adam_epsilon = to_real(k, value);
  else if (k == "target_sync_interval") c.target_sync_interval = to_count(k, value);
  else if (k == "learning_starts") c.learning_starts = to_count(k, value);
  else if (k == "replay_capacity") c.replay_capacity = to_count(k, value);
  else if (k == "frames" || k == "frame_budget") c.frame_budget = to_count(k, value);
  else if (k == "batch_size") c.batch_size = to_count(k, value);
  else if (k == "sigma0") c.sigma0 = to_real(k, value);
  else if (k == "k_final") c.k_final = to_real(k, value);
  else if (k == "growth_a") c.growth_a = to_real(k, value);
  else if (k == "inf_reward") c.inf_reward = to_real(k, value);
  else if (k == "sup_reward") c.sup_reward = to_real(k, value);
  else if (k == "schedule") c.schedule = parse_schedule(trim(value));
  else if (k == "epsilon_start") c.epsilon_start = to_real(k, value);
  else if (k == "epsilon_final") c.epsilon_final = to_real(k, value);
  else if (k == "epsilon_decay_frames") c.epsilon_decay_frames = to_count(k, value);
  else if (k == "eval_episodes") c.eval_episodes = to_count(k, value);
  else if (k == "hidden") {
    c.hidden.clear();
    std::string_view rest = value;
    while (!trim(rest).empty()) {
      const auto comma = rest.find(',');
      c.hidden.push_back(to_count(k, rest.substr(0, comma)));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  } else {
    throw ConfigError(k, "unknown configuration key");
  }
}

std::map<std::string, std::string> parse_key_value(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(number), "expected key = value");
    out[std::string(trim(view.substr(0, eq)))] = std::string(trim(view.substr(eq + 1)));
  }
  return out;
}

ExperimentConfig experiment_from_map(const std::map<std::string, std::string>& entries) {
  ExperimentConfig cfg;
  if (auto it = entries.find("env"); it != entries.end())
    cfg.environment = parse_env_kind(it->second);
  cfg.agent = AgentConfig::defaults(cfg.environment);
  for (const auto& [key, value] : entries) {
    if (key == "env") continue;
    if (key == "algo") cfg.algorithm = parse_algorithm(value);
    else if (key == "seeds") cfg.seeds = parse_seed_list(value);
    else if (key == "out") cfg.output_dir = value;
    else apply_override(cfg.agent, key, value);
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read config file " + file.string());
  return experiment_from_map(parse_key_value(in));
}

std::filesystem::path default_output_root() {
  if (const char* env = std::getenv("NOISYQ_OUT"); env && *env) return env;
  return "runs";
}

}  // namespace noisyq::harness
