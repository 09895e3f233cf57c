#include "noisyq/adam.hpp"

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "noisyq/errors.hpp"

namespace noisyq {

AdamState::AdamState(std::size_t size, AdamOptions options)
    : options_(options), first_moment_(size, 0.0), second_moment_(size, 0.0) {}

void AdamState::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != size() || grads.size() != size()) {
    throw ShapeError("adam_step: state holds " + std::to_string(size()) + " entries, got " +
                     std::to_string(params.size()) + " params and " +
                     std::to_string(grads.size()) + " grads");
  }
  ++step_count_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double t = static_cast<double>(step_count_);
  const double correction1 = 1.0 - std::pow(b1, t);
  const double correction2 = 1.0 - std::pow(b2, t);

  const auto n = static_cast<Eigen::Index>(size());
  Eigen::Map<Eigen::ArrayXd> p(params.data(), n);
  Eigen::Map<const Eigen::ArrayXd> g(grads.data(), n);
  Eigen::Map<Eigen::ArrayXd> m(first_moment_.data(), n);
  Eigen::Map<Eigen::ArrayXd> v(second_moment_.data(), n);

  m = b1 * m + (1.0 - b1) * g;
  v = b2 * v + (1.0 - b2) * g.square();
  const Eigen::ArrayXd denom = (v / correction2).sqrt() + options_.epsilon;
  const Eigen::ArrayXd update = options_.learning_rate * (m / correction1) / denom;
  p -= (denom == 0.0).select(0.0, update);
}

}  // namespace noisyq
