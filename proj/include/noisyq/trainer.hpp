#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "noisyq/agent.hpp"
#include "noisyq/envs.hpp"

namespace noisyq {

enum class ScheduleKind { reward, frame, none };

std::string_view to_string(ScheduleKind kind);
ScheduleKind parse_schedule(std::string_view name);

struct AgentConfig {
  double gamma = 0.99;
  double learning_rate = 1e-4;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 0.0;
  long target_sync_interval = 1000;
  long learning_starts = 32;
  long replay_capacity = 10000;
  long frame_budget = 30000;
  long batch_size = 32;
  std::vector<Index> hidden{128, 128};
  double sigma0 = 0.4;
  double k_final = 4.0;
  double growth_a = 5000.0;
  double inf_reward = 0.0;
  double sup_reward = 200.0;
  ScheduleKind schedule = ScheduleKind::reward;
  double epsilon_start = 1.0;
  double epsilon_final = 0.01;
  long epsilon_decay_frames = 15000;
  long eval_episodes = 64;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  /// Shared defaults plus the per-environment learning rate and reward anchors.
  static AgentConfig defaults(EnvKind env);
};

struct EpisodeRow {
  long episode = 0;
  long frame = 0;  // frame index at which the episode ended
  double episode_return = 0.0;
  long length = 0;
};

struct FrameRow {
  long frame = 0;
  double k = 0.0;
  double stability = 0.0;
  double loss = 0.0;  // NaN on frames without a gradient step
};

struct Evaluation {
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> returns;
};

struct RunMetrics {
  std::vector<EpisodeRow> episodes;
  std::vector<FrameRow> frames;
  long sync_count = 0;
  long learn_steps = 0;
  double initial_stability = 0.0;
  double final_stability = 0.0;
  std::optional<Evaluation> evaluation;
};

struct TrainResult {
  RunMetrics metrics;
  QNetwork online;
  QNetwork target;
};

/// Called after every frame with the frame index and the online network.
using FrameObserver = std::function<void(long frame, const QNetwork& online)>;

/// Runs one seeded training run of `algo` on `env` for config.frame_budget
/// frames. DQN explores epsilon-greedily; the noisy agents act greedily on a
/// fresh noise draw. Only nrowan applies the k * D term (noisynet uses k = 0).
TrainResult train(Environment& env, Algorithm algo, const AgentConfig& config, std::uint64_t seed,
                  const FrameObserver& observer = {});

/// Plays `episodes` full episodes with the same action-selection path as
/// training: fresh noise per step for noisy nets, `epsilon`-greedy otherwise.
/// The network passed in is not modified. Returns population mean/std.
/// With `repeat_first_reset` every episode starts from the same initial state.
Evaluation evaluate(const QNetwork& net, Environment& env, long episodes, std::uint64_t seed,
                    double epsilon, bool repeat_first_reset = false);

/// Independent generator for one named stream of a seeded run.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

}  // namespace noisyq
