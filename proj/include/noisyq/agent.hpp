#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "noisyq/adam.hpp"
#include "noisyq/qnetwork.hpp"
#include "noisyq/replay.hpp"

namespace noisyq {

enum class Algorithm { dqn, noisynet, nrowan };

std::string_view to_string(Algorithm algo);
Algorithm parse_algorithm(std::string_view name);

/// Transitions packed column-wise for batched evaluation.
struct Minibatch {
  Batch states;
  std::vector<int> actions;
  RealVector rewards;
  Batch next_states;
  std::vector<bool> terminals;

  static Minibatch pack(std::span<const Transition> transitions);
  Index size() const { return states.cols(); }
};

/// Index of the largest entry; ties go to the lowest index.
int greedy_action(const RealVector& q);

/// Noisy networks: draws fresh noise and acts greedily. Plain networks:
/// epsilon-greedy with the given exploration rate.
int select_action(QNetwork& net, const RealVector& obs, double epsilon, Rng& noise_rng,
                  Rng& explore_rng);

/// r + gamma * max_a' Q_target(s', a') per transition, or r for terminal ones.
/// Uses whatever noise the target network currently holds.
RealVector td_target(QNetwork& target, const Minibatch& batch, double gamma);

struct LossReport {
  double td_loss = 0.0;    // mean squared TD error
  double stability = 0.0;  // D of the online output layer (0 for plain nets)
  double total = 0.0;      // td_loss + k * stability
};

/// Forward-only evaluation of the augmented objective with the current noise.
LossReport objective(QNetwork& online, QNetwork& target, const Minibatch& batch, double k,
                     double gamma);

/// Zeroes the online gradients, then fills them with the gradient of
/// `objective`. The k * dD/dsigma term only touches the output layer's sigma.
LossReport accumulate_gradients(QNetwork& online, QNetwork& target, const Minibatch& batch,
                                double k, double gamma);

/// One Adam state per parameter group of a network.
class Optimizer {
 public:
  Optimizer(QNetwork& net, AdamOptions options);

  void step(QNetwork& net);
  const std::vector<AdamState>& states() const { return states_; }

 private:
  std::vector<AdamState> states_;
};

/// accumulate_gradients followed by one optimizer step. Throws NumericError
/// if the objective is not finite; parameters are left untouched in that case.
LossReport train_step(QNetwork& online, QNetwork& target, const Minibatch& batch, double k,
                      double gamma, Optimizer& optimizer);

void sync_target(const QNetwork& online, QNetwork& target);

}  // namespace noisyq
