#include "noisyq/trainer.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "noisyq/schedule.hpp"

namespace noisyq {

namespace {

enum Stream : std::uint64_t {
  kInitStream = 0,
  kEnvStream = 1,
  kNoiseStream = 2,
  kReplayStream = 3,
  kExploreStream = 4,
  kEvalEnvStream = 10,
  kEvalNoiseStream = 11,
  kEvalExploreStream = 12,
};

}  // namespace

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::reward: return "reward";
    case ScheduleKind::frame: return "frame";
    case ScheduleKind::none: return "none";
  }
  return "unknown";
}

ScheduleKind parse_schedule(std::string_view name) {
  if (name == "reward") return ScheduleKind::reward;
  if (name == "frame") return ScheduleKind::frame;
  if (name == "none") return ScheduleKind::none;
  throw ConfigError("schedule", "unknown schedule '" + std::string(name) +
                                    "' (expected reward, frame or none)");
}

void AgentConfig::validate() const {
  auto positive = [](const char* field, double v) {
    if (!(v > 0.0)) throw ConfigError(field, "must be positive");
  };
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma", "must lie in [0, 1]");
  positive("learning_rate", learning_rate);
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0)) throw ConfigError("adam_beta1", "must lie in [0, 1)");
  if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) throw ConfigError("adam_beta2", "must lie in [0, 1)");
  if (!(adam_epsilon >= 0.0)) throw ConfigError("adam_epsilon", "must be non-negative");
  positive("target_sync_interval", static_cast<double>(target_sync_interval));
  positive("learning_starts", static_cast<double>(learning_starts));
  positive("replay_capacity", static_cast<double>(replay_capacity));
  if (frame_budget < 0) throw ConfigError("frame_budget", "must be non-negative");
  positive("batch_size", static_cast<double>(batch_size));
  if (batch_size > replay_capacity) throw ConfigError("batch_size", "exceeds replay_capacity");
  if (hidden.empty()) throw ConfigError("hidden", "needs at least one hidden layer");
  for (Index h : hidden)
    if (h <= 0) throw ConfigError("hidden", "layer widths must be positive");
  if (!(sigma0 >= 0.0)) throw ConfigError("sigma0", "must be non-negative");
  if (!(k_final >= 0.0)) throw ConfigError("k_final", "must be non-negative");
  positive("growth_a", growth_a);
  if (!(inf_reward < sup_reward)) throw ConfigError("inf_reward", "must be below sup_reward");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0))
    throw ConfigError("epsilon_start", "must lie in [0, 1]");
  if (!(epsilon_final >= 0.0 && epsilon_final <= 1.0))
    throw ConfigError("epsilon_final", "must lie in [0, 1]");
  if (epsilon_decay_frames < 0) throw ConfigError("epsilon_decay_frames", "must be non-negative");
  if (eval_episodes < 0) throw ConfigError("eval_episodes", "must be non-negative");
}

AgentConfig AgentConfig::defaults(EnvKind env) {
  AgentConfig c;
  switch (env) {
    case EnvKind::cartpole:
      c.learning_rate = 1e-4;
      c.inf_reward = 0.0;
      c.sup_reward = 200.0;
      break;
    case EnvKind::mountaincar:
      c.learning_rate = 1e-3;
      c.inf_reward = -200.0;
      c.sup_reward = -110.0;
      break;
    case EnvKind::acrobot:
      c.learning_rate = 1e-3;
      c.inf_reward = -500.0;
      c.sup_reward = -80.0;
      break;
  }
  return c;
}

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x6e6f6973u};
  return Rng(seq);
}

TrainResult train(Environment& env, Algorithm algo, const AgentConfig& config, std::uint64_t seed,
                  const FrameObserver& observer) {
  config.validate();
  const bool noisy = algo != Algorithm::dqn;

  Rng init_rng = make_stream(seed, kInitStream);
  Rng env_rng = make_stream(seed, kEnvStream);
  Rng noise_rng = make_stream(seed, kNoiseStream);
  Rng replay_rng = make_stream(seed, kReplayStream);
  Rng explore_rng = make_stream(seed, kExploreStream);

  QNetwork online(env.observation_size(), env.action_count(), config.hidden, noisy, config.sigma0,
                  init_rng);
  if (noisy) online.sample_noise(noise_rng);
  QNetwork target = online;

  Optimizer optimizer(online, {config.learning_rate, config.adam_beta1, config.adam_beta2,
                               config.adam_epsilon});
  ReplayBuffer buffer(static_cast<std::size_t>(config.replay_capacity));

  RunMetrics metrics;
  metrics.initial_stability = noisy ? stability(online.output_layer()) : 0.0;
  metrics.frames.reserve(static_cast<std::size_t>(config.frame_budget));

  auto weight_for = [&](long frame, double episode_reward) {
    if (algo != Algorithm::nrowan) return 0.0;
    switch (config.schedule) {
      case ScheduleKind::reward:
        return k_reward(episode_reward, config.inf_reward, config.sup_reward, config.k_final);
      case ScheduleKind::frame:
        return k_frame(static_cast<double>(frame), config.k_final, config.growth_a);
      case ScheduleKind::none:
        return 0.0;
    }
    return 0.0;
  };

  RealVector obs = config.frame_budget > 0 ? env.reset(env_rng()) : RealVector();
  double episode_reward = 0.0;  // running reward driving the k schedule
  double episode_return = 0.0;
  long episode = 0;
  const auto learn_from = static_cast<std::size_t>(std::max(config.learning_starts, config.batch_size));

  for (long t = 1; t <= config.frame_budget; ++t) {
    const double epsilon =
        noisy ? 0.0
              : linear_epsilon(t - 1, config.epsilon_start, config.epsilon_final,
                               config.epsilon_decay_frames);
    const int action = select_action(online, obs, epsilon, noise_rng, explore_rng);
    StepResult step = env.step(action);
    buffer.push({obs, action, step.reward, step.observation, step.terminal});

    const double d = noisy ? stability(online.output_layer()) : 0.0;
    episode_reward += step.reward;
    const double k = weight_for(t, episode_reward);
    episode_return += step.reward;

    if (step.terminal) {
      metrics.episodes.push_back({episode, t, episode_return, env.step_index()});
      ++episode;
      episode_reward = 0.0;
      episode_return = 0.0;
      obs = env.reset(env_rng());
    } else {
      obs = std::move(step.observation);
    }

    double loss = std::numeric_limits<double>::quiet_NaN();
    if (buffer.size() >= learn_from) {
      const auto sampled = buffer.sample(static_cast<std::size_t>(config.batch_size), replay_rng);
      const Minibatch batch = Minibatch::pack(sampled);
      if (noisy) {
        online.sample_noise(noise_rng);
        target.sample_noise(noise_rng);
      }
      loss = train_step(online, target, batch, k, config.gamma, optimizer).total;
      ++metrics.learn_steps;
    }

    if (t % config.target_sync_interval == 0) {
      sync_target(online, target);
      ++metrics.sync_count;
    }

    metrics.frames.push_back({t, k, d, loss});
    if (observer) observer(t, online);
  }

  metrics.final_stability = noisy ? stability(online.output_layer()) : 0.0;
  return {std::move(metrics), std::move(online), std::move(target)};
}

Evaluation evaluate(const QNetwork& net, Environment& env, long episodes, std::uint64_t seed,
                    double epsilon, bool repeat_first_reset) {
  QNetwork player = net;
  Rng env_rng = make_stream(seed, kEvalEnvStream);
  Rng noise_rng = make_stream(seed, kEvalNoiseStream);
  Rng explore_rng = make_stream(seed, kEvalExploreStream);

  Evaluation eval;
  eval.returns.reserve(static_cast<std::size_t>(episodes));
  const std::uint64_t first_reset = env_rng();
  for (long e = 0; e < episodes; ++e) {
    RealVector obs = env.reset(repeat_first_reset || e == 0 ? first_reset : env_rng());
    double total = 0.0;
    for (;;) {
      const int action = select_action(player, obs, epsilon, noise_rng, explore_rng);
      StepResult step = env.step(action);
      total += step.reward;
      if (step.terminal) break;
      obs = std::move(step.observation);
    }
    eval.returns.push_back(total);
  }
  if (!eval.returns.empty()) {
    const double n = static_cast<double>(eval.returns.size());
    eval.mean = std::accumulate(eval.returns.begin(), eval.returns.end(), 0.0) / n;
    double sq = 0.0;
    for (double r : eval.returns) sq += (r - eval.mean) * (r - eval.mean);
    eval.std = std::sqrt(sq / n);
  }
  return eval;
}

}  // namespace noisyq
