#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "noisyq/errors.hpp"
#include "noisyq/schedule.hpp"
#include "noisyq/trainer.hpp"

namespace noisyq {
namespace {

AgentConfig quick(EnvKind env, long frames) {
  AgentConfig c = AgentConfig::defaults(env);
  c.hidden = {16, 16};
  c.frame_budget = frames;
  c.replay_capacity = 1000;
  c.target_sync_interval = 200;
  c.learning_rate = 1e-3;
  return c;
}

std::vector<std::uint64_t> bits(const RunMetrics& m) {
  std::vector<std::uint64_t> out;
  auto put = [&](double v) { out.push_back(std::bit_cast<std::uint64_t>(v)); };
  for (const auto& e : m.episodes) {
    out.push_back(static_cast<std::uint64_t>(e.frame));
    out.push_back(static_cast<std::uint64_t>(e.length));
    put(e.episode_return);
  }
  for (const auto& f : m.frames) {
    put(f.k);
    put(f.stability);
    put(f.loss);
  }
  put(m.final_stability);
  return out;
}

std::vector<double> all_parameters(QNetwork& net) {
  std::vector<double> out;
  for (auto& g : net.parameters()) out.insert(out.end(), g.value.begin(), g.value.end());
  return out;
}

TEST(ScheduleNames, RoundTrip) {
  for (ScheduleKind k : {ScheduleKind::reward, ScheduleKind::frame, ScheduleKind::none})
    EXPECT_EQ(parse_schedule(to_string(k)), k);
  EXPECT_THROW(parse_schedule("cosine"), ConfigError);
}

TEST(AgentConfigDefaults, PerEnvironment) {
  const AgentConfig cp = AgentConfig::defaults(EnvKind::cartpole);
  EXPECT_EQ(cp.learning_rate, 1e-4);
  EXPECT_EQ(cp.inf_reward, 0.0);
  EXPECT_EQ(cp.sup_reward, 200.0);
  EXPECT_EQ(cp.gamma, 0.99);
  EXPECT_EQ(cp.batch_size, 32);
  EXPECT_EQ(cp.replay_capacity, 10000);
  EXPECT_EQ(cp.target_sync_interval, 1000);
  EXPECT_EQ(cp.frame_budget, 30000);
  EXPECT_EQ(cp.k_final, 4.0);
  EXPECT_EQ(cp.sigma0, 0.4);
  EXPECT_EQ(cp.schedule, ScheduleKind::reward);
  const AgentConfig mc = AgentConfig::defaults(EnvKind::mountaincar);
  EXPECT_EQ(mc.learning_rate, 1e-3);
  EXPECT_EQ(mc.inf_reward, -200.0);
  EXPECT_EQ(mc.sup_reward, -110.0);
  const AgentConfig ac = AgentConfig::defaults(EnvKind::acrobot);
  EXPECT_EQ(ac.learning_rate, 1e-3);
  EXPECT_EQ(ac.inf_reward, -500.0);
  EXPECT_EQ(ac.sup_reward, -80.0);
}

TEST(AgentConfigValidate, NamesOffendingField) {
  auto field_of = [](AgentConfig c) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("none");
  };
  AgentConfig c;
  EXPECT_EQ(field_of(c), "none");
  c.k_final = -1;
  EXPECT_EQ(field_of(c), "k_final");
  c = AgentConfig{};
  c.inf_reward = 300;
  EXPECT_EQ(field_of(c), "inf_reward");
  c = AgentConfig{};
  c.batch_size = 0;
  EXPECT_EQ(field_of(c), "batch_size");
  c = AgentConfig{};
  c.learning_rate = 0;
  EXPECT_EQ(field_of(c), "learning_rate");
}

TEST(Train, ZeroBudgetLeavesEverythingUntouched) {
  CartPole env;
  AgentConfig c = quick(EnvKind::cartpole, 0);
  TrainResult r = train(env, Algorithm::nrowan, c, 7);
  EXPECT_TRUE(r.metrics.episodes.empty());
  EXPECT_TRUE(r.metrics.frames.empty());
  EXPECT_EQ(r.metrics.learn_steps, 0);
  EXPECT_EQ(r.metrics.sync_count, 0);
  Rng init = make_stream(7, 0);
  QNetwork fresh(4, 2, c.hidden, true, c.sigma0, init);
  EXPECT_EQ(all_parameters(r.online), all_parameters(fresh));
  EXPECT_EQ(all_parameters(r.target), all_parameters(fresh));
}

TEST(Train, ThirtySyncsOverThirtyThousandFrames) {
  CartPole env;
  AgentConfig c = AgentConfig::defaults(EnvKind::cartpole);
  c.hidden = {2};
  c.learning_starts = 1000000;  // acting only
  TrainResult r = train(env, Algorithm::nrowan, c, 1);
  EXPECT_EQ(r.metrics.sync_count, 30);
  EXPECT_EQ(r.metrics.learn_steps, 0);
  EXPECT_EQ(r.metrics.frames.size(), 30000u);
}

TEST(Train, LossLoggedOnlyOnceLearningStarts) {
  CartPole env;
  AgentConfig c = quick(EnvKind::cartpole, 300);
  TrainResult r = train(env, Algorithm::noisynet, c, 3);
  for (const FrameRow& f : r.metrics.frames) {
    if (f.frame < 32)
      EXPECT_TRUE(std::isnan(f.loss)) << f.frame;
    else
      EXPECT_TRUE(std::isfinite(f.loss)) << f.frame;
  }
  EXPECT_EQ(r.metrics.learn_steps, 300 - 32 + 1);
}

TEST(Train, SameSeedIsBitwiseReproducible) {
  for (Algorithm a : {Algorithm::dqn, Algorithm::noisynet, Algorithm::nrowan}) {
    CartPole e1, e2;
    const AgentConfig c = quick(EnvKind::cartpole, 800);
    TrainResult r1 = train(e1, a, c, 42);
    TrainResult r2 = train(e2, a, c, 42);
    EXPECT_EQ(bits(r1.metrics), bits(r2.metrics)) << to_string(a);
    EXPECT_EQ(all_parameters(r1.online), all_parameters(r2.online)) << to_string(a);
    TrainResult r3 = train(e1, a, c, 43);
    EXPECT_NE(all_parameters(r1.online), all_parameters(r3.online)) << to_string(a);
  }
}

TEST(Train, ZeroWeightReducesToNoisyNet) {
  for (EnvKind kind : {EnvKind::cartpole, EnvKind::acrobot}) {
    auto e1 = make_environment(kind), e2 = make_environment(kind);
    AgentConfig c = quick(kind, 600);
    c.k_final = 0.0;
    TrainResult a = train(*e1, Algorithm::nrowan, c, 5);
    TrainResult b = train(*e2, Algorithm::noisynet, c, 5);
    EXPECT_EQ(all_parameters(a.online), all_parameters(b.online));
    EXPECT_EQ(bits(a.metrics), bits(b.metrics));
  }
}

TEST(Train, WeightStaysWithinBoundsForBothSchedules) {
  for (ScheduleKind s : {ScheduleKind::reward, ScheduleKind::frame}) {
    for (EnvKind kind : {EnvKind::cartpole, EnvKind::mountaincar, EnvKind::acrobot}) {
      auto env = make_environment(kind);
      AgentConfig c = quick(kind, 700);
      c.schedule = s;
      c.k_final = 3.0;
      TrainResult r = train(*env, Algorithm::nrowan, c, 9);
      for (const FrameRow& f : r.metrics.frames) {
        ASSERT_GE(f.k, 0.0);
        ASSERT_LE(f.k, 3.0);
      }
    }
  }
}

TEST(Train, FrameScheduleFollowsFrameCount) {
  CartPole env;
  AgentConfig c = quick(EnvKind::cartpole, 200);
  c.schedule = ScheduleKind::frame;
  c.growth_a = 50.0;
  TrainResult r = train(env, Algorithm::nrowan, c, 2);
  for (const FrameRow& f : r.metrics.frames)
    EXPECT_EQ(f.k, k_frame(static_cast<double>(f.frame), 4.0, 50.0));
}

TEST(Train, CartPoleRewardWeightRisesWithinEpisodeAndResets) {
  CartPole env;
  const AgentConfig c = quick(EnvKind::cartpole, 1500);
  TrainResult r = train(env, Algorithm::nrowan, c, 11);
  ASSERT_GE(r.metrics.episodes.size(), 3u);
  std::vector<bool> ends(1501, false);
  for (const EpisodeRow& e : r.metrics.episodes) ends[e.frame] = true;
  const auto& fr = r.metrics.frames;
  EXPECT_EQ(fr[0].k, k_reward(1.0, 0.0, 200.0, 4.0));
  for (std::size_t i = 1; i < fr.size(); ++i) {
    if (ends[fr[i - 1].frame])
      EXPECT_EQ(fr[i].k, k_reward(1.0, 0.0, 200.0, 4.0)) << "frame " << fr[i].frame;
    else
      EXPECT_GE(fr[i].k, fr[i - 1].k) << "frame " << fr[i].frame;
  }
  for (const EpisodeRow& e : r.metrics.episodes)
    EXPECT_EQ(fr[e.frame - 1].k, k_reward(e.episode_return, 0.0, 200.0, 4.0));
}

TEST(Train, BaselinesUseNoWeight) {
  CartPole env;
  const AgentConfig c = quick(EnvKind::cartpole, 300);
  for (Algorithm a : {Algorithm::dqn, Algorithm::noisynet}) {
    TrainResult r = train(env, a, c, 4);
    for (const FrameRow& f : r.metrics.frames) ASSERT_EQ(f.k, 0.0);
  }
  TrainResult d = train(env, Algorithm::dqn, c, 4);
  for (const FrameRow& f : d.metrics.frames) ASSERT_EQ(f.stability, 0.0);
}

TEST(Train, LoggedStabilityTracksOutputLayer) {
  CartPole env;
  const AgentConfig c = quick(EnvKind::cartpole, 200);
  std::vector<double> observed;
  TrainResult r = train(env, Algorithm::nrowan, c, 6, [&](long, const QNetwork& net) {
    observed.push_back(stability(net.output_layer()));
  });
  ASSERT_EQ(observed.size(), 200u);
  EXPECT_EQ(r.metrics.frames[0].stability, r.metrics.initial_stability);
  // Each frame logs D before that frame's update.
  for (std::size_t i = 1; i < observed.size(); ++i)
    EXPECT_EQ(r.metrics.frames[i].stability, observed[i - 1]);
  EXPECT_EQ(r.metrics.final_stability, observed.back());
}

TEST(Train, EpisodesAreConsistent) {
  for (EnvKind kind : {EnvKind::cartpole, EnvKind::mountaincar, EnvKind::acrobot}) {
    auto env = make_environment(kind);
    TrainResult r = train(*env, Algorithm::dqn, quick(kind, 1200), 8);
    long prev_end = 0;
    for (const EpisodeRow& e : r.metrics.episodes) {
      EXPECT_EQ(e.frame - prev_end, e.length);
      EXPECT_GE(e.episode_return, env->return_bounds().min);
      EXPECT_LE(e.episode_return, env->return_bounds().max);
      EXPECT_LE(e.length, env->episode_cap());
      prev_end = e.frame;
    }
  }
}

TEST(Train, StrongWeightShrinksOutputSigma) {
  CartPole env;
  AgentConfig c = quick(EnvKind::cartpole, 2000);
  c.schedule = ScheduleKind::frame;
  c.growth_a = 10.0;
  TrainResult r = train(env, Algorithm::nrowan, c, 12);
  EXPECT_LT(r.metrics.final_stability, r.metrics.initial_stability);
}

TEST(Train, InvalidConfigRejected) {
  CartPole env;
  AgentConfig c = quick(EnvKind::cartpole, 10);
  c.gamma = 1.5;
  EXPECT_THROW(train(env, Algorithm::dqn, c, 1), ConfigError);
}

TEST(Evaluate, NoiseFreeNetworkWithRepeatedResetHasZeroSpread) {
  Rng rng(1);
  QNetwork net(4, 2, {8}, true, 0.4, rng);
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    net.noisy_layer(i).sigma_w().setZero();
    net.noisy_layer(i).sigma_b().setZero();
  }
  CartPole env;
  const Evaluation e = evaluate(net, env, 16, 3, 0.0, true);
  ASSERT_EQ(e.returns.size(), 16u);
  EXPECT_EQ(e.std, 0.0);
  for (double r : e.returns) EXPECT_EQ(r, e.returns.front());
}

TEST(Evaluate, PopulationStatistics) {
  Rng rng(2);
  QNetwork net(4, 2, {8}, true, 0.4, rng);
  CartPole env;
  const Evaluation e = evaluate(net, env, 10, 5, 0.0);
  double mean = 0.0;
  for (double r : e.returns) mean += r / 10.0;
  double var = 0.0;
  for (double r : e.returns) var += (r - mean) * (r - mean) / 10.0;
  EXPECT_NEAR(e.mean, mean, 1e-12);
  EXPECT_NEAR(e.std, std::sqrt(var), 1e-12);
}

TEST(Evaluate, LeavesNetworkUnchangedAndIsDeterministic) {
  Rng rng(3);
  QNetwork net(6, 3, {8}, true, 0.4, rng);
  const std::vector<double> before = all_parameters(net);
  const RealMatrix eps = net.output_layer().eps_w();
  Acrobot env;
  const Evaluation a = evaluate(net, env, 3, 9, 0.0);
  const Evaluation b = evaluate(net, env, 3, 9, 0.0);
  EXPECT_EQ(a.returns, b.returns);
  EXPECT_EQ(all_parameters(net), before);
  EXPECT_EQ(net.output_layer().eps_w(), eps);
}

TEST(Streams, IndependentPerStreamAndSeed) {
  Rng a = make_stream(1, 0), b = make_stream(1, 1), c = make_stream(2, 0), d = make_stream(1, 0);
  const auto x = a();
  EXPECT_NE(x, b());
  EXPECT_NE(x, c());
  EXPECT_EQ(x, d());
}

}  // namespace
}  // namespace noisyq
