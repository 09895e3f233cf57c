#include "noisyq/agent.hpp"

#include <cmath>
#include <string>

namespace noisyq {

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::dqn: return "dqn";
    case Algorithm::noisynet: return "noisynet";
    case Algorithm::nrowan: return "nrowan";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "dqn") return Algorithm::dqn;
  if (name == "noisynet") return Algorithm::noisynet;
  if (name == "nrowan") return Algorithm::nrowan;
  throw ConfigError("algo", "unknown algorithm '" + std::string(name) +
                                "' (expected dqn, noisynet or nrowan)");
}

Minibatch Minibatch::pack(std::span<const Transition> transitions) {
  require_shape(!transitions.empty(), "Minibatch::pack: empty batch");
  const Index dim = transitions.front().state.size();
  const Index n = static_cast<Index>(transitions.size());
  Minibatch b{Batch(dim, n), std::vector<int>(n), RealVector(n), Batch(dim, n),
              std::vector<bool>(n)};
  for (Index i = 0; i < n; ++i) {
    const Transition& t = transitions[i];
    require_shape(t.state.size() == dim && t.next_state.size() == dim,
                  "Minibatch::pack: inconsistent state dimensions");
    b.states.col(i) = t.state;
    b.next_states.col(i) = t.next_state;
    b.actions[i] = t.action;
    b.rewards(i) = t.reward;
    b.terminals[i] = t.terminal;
  }
  return b;
}

int greedy_action(const RealVector& q) {
  require_shape(q.size() > 0, "greedy_action: empty Q vector");
  Index best = 0;
  for (Index a = 1; a < q.size(); ++a)
    if (q(a) > q(best)) best = a;
  return static_cast<int>(best);
}

int select_action(QNetwork& net, const RealVector& obs, double epsilon, Rng& noise_rng,
                  Rng& explore_rng) {
  require_shape(obs.size() == net.input_size(), "select_action: observation has length " +
                                                    std::to_string(obs.size()) + ", network expects " +
                                                    std::to_string(net.input_size()));
  if (net.noisy()) {
    net.sample_noise(noise_rng);
    return greedy_action(net.q_values(obs));
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(explore_rng) < epsilon) {
    std::uniform_int_distribution<int> any(0, net.action_count() - 1);
    return any(explore_rng);
  }
  return greedy_action(net.q_values(obs));
}

RealVector td_target(QNetwork& target, const Minibatch& batch, double gamma) {
  const Batch q_next = target.forward(batch.next_states);
  RealVector y = batch.rewards;
  for (Index i = 0; i < batch.size(); ++i)
    if (!batch.terminals[i]) y(i) += gamma * q_next.col(i).maxCoeff();
  return y;
}

namespace {

struct Prediction {
  Batch q;
  RealVector residual;  // Q(s, a) - y
};

Prediction predict(QNetwork& online, QNetwork& target, const Minibatch& batch, double gamma) {
  const RealVector y = td_target(target, batch, gamma);
  Prediction p{online.forward(batch.states), RealVector(batch.size())};
  for (Index i = 0; i < batch.size(); ++i) {
    const int a = batch.actions[i];
    require_shape(a >= 0 && a < p.q.rows(), "train_step: action index out of range");
    p.residual(i) = p.q(a, i) - y(i);
  }
  return p;
}

LossReport report(const QNetwork& online, const RealVector& residual, double k) {
  LossReport r;
  r.td_loss = residual.squaredNorm() / static_cast<double>(residual.size());
  r.stability = online.noisy() ? stability(online.output_layer()) : 0.0;
  r.total = r.td_loss + k * r.stability;
  return r;
}

}  // namespace

LossReport objective(QNetwork& online, QNetwork& target, const Minibatch& batch, double k,
                     double gamma) {
  return report(online, predict(online, target, batch, gamma).residual, k);
}

LossReport accumulate_gradients(QNetwork& online, QNetwork& target, const Minibatch& batch,
                                double k, double gamma) {
  Prediction p = predict(online, target, batch, gamma);
  const LossReport r = report(online, p.residual, k);

  Batch upstream = Batch::Zero(p.q.rows(), p.q.cols());
  const double scale = 2.0 / static_cast<double>(batch.size());
  for (Index i = 0; i < batch.size(); ++i) upstream(batch.actions[i], i) = scale * p.residual(i);

  online.zero_grad();
  online.backward(upstream);

  if (online.noisy() && k != 0.0) {
    const StabilityGrad dd = stability_gradient(online.output_layer());
    auto params = online.parameters();
    // The output layer's sigma_w and sigma_b are the last two groups.
    auto& gw = params[params.size() - 2].grad;
    auto& gb = params[params.size() - 1].grad;
    for (std::size_t i = 0; i < gw.size(); ++i) gw[i] += k * dd.sigma_w.data()[i];
    for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += k * dd.sigma_b.data()[i];
  }
  return r;
}

Optimizer::Optimizer(QNetwork& net, AdamOptions options) {
  for (const auto& group : net.parameters()) states_.emplace_back(group.value.size(), options);
}

void Optimizer::step(QNetwork& net) {
  auto params = net.parameters();
  if (params.size() != states_.size())
    throw ShapeError("Optimizer::step: network does not match optimizer layout");
  for (std::size_t i = 0; i < params.size(); ++i) states_[i].step(params[i].value, params[i].grad);
}

LossReport train_step(QNetwork& online, QNetwork& target, const Minibatch& batch, double k,
                      double gamma, Optimizer& optimizer) {
  const LossReport r = accumulate_gradients(online, target, batch, k, gamma);
  if (!std::isfinite(r.total)) throw NumericError("train_step: loss is not finite");
  optimizer.step(online);
  return r;
}

void sync_target(const QNetwork& online, QNetwork& target) { target.copy_parameters_from(online); }

}  // namespace noisyq
