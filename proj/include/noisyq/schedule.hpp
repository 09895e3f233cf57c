#pragma once

namespace noisyq {

/// Frame-driven weight: k_final * (1 - exp(-frames / growth)).
double k_frame(double frames, double k_final, double growth);

/// Reward-driven weight: k_final * (r - inf) / (sup - inf), clamped to [0, k_final].
double k_reward(double episode_reward, double inf_reward, double sup_reward, double k_final);

/// Linearly annealed exploration rate, held at `final_value` after `decay_frames`.
double linear_epsilon(long frame, double start, double final_value, long decay_frames);

}  // namespace noisyq
