#include "noisyq/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "noisyq/errors.hpp"

namespace noisyq {

double k_frame(double frames, double k_final, double growth) {
  if (!(growth > 0.0)) throw ConfigError("growth_a", "must be positive");
  return k_final - k_final * std::exp(-frames / growth);
}

double k_reward(double episode_reward, double inf_reward, double sup_reward, double k_final) {
  if (!(inf_reward < sup_reward)) throw ConfigError("inf_reward", "must be below sup_reward");
  const double k = k_final * (episode_reward - inf_reward) / (sup_reward - inf_reward);
  return std::clamp(k, 0.0, k_final);
}

double linear_epsilon(long frame, double start, double final_value, long decay_frames) {
  if (decay_frames <= 0 || frame >= decay_frames) return final_value;
  const double progress = static_cast<double>(frame) / static_cast<double>(decay_frames);
  return start + (final_value - start) * progress;
}

}  // namespace noisyq
