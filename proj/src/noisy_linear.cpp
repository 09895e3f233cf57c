#include "noisyq/noisy_linear.hpp"

#include <cmath>

namespace noisyq {

namespace {

double sign(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

}  // namespace

double factorise(double x) { return sign(x) * std::sqrt(std::abs(x)); }

NoiseDraw NoiseDraw::sample(Index inputs, Index outputs, Rng& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  NoiseDraw draw{RealVector(inputs), RealVector(outputs)};
  for (Index i = 0; i < inputs; ++i) draw.eps_in(i) = unit(rng);
  for (Index j = 0; j < outputs; ++j) draw.eps_out(j) = unit(rng);
  return draw;
}

NoisyLinear::NoisyLinear(Index inputs, Index outputs)
    : mu_w_(RealMatrix::Zero(outputs, inputs)),
      sigma_w_(RealMatrix::Zero(outputs, inputs)),
      mu_b_(RealVector::Zero(outputs)),
      sigma_b_(RealVector::Zero(outputs)),
      eps_w_(RealMatrix::Zero(outputs, inputs)),
      eps_b_(RealVector::Zero(outputs)) {
  require_shape(inputs > 0 && outputs > 0, "NoisyLinear: dimensions must be positive");
}

NoisyLinear NoisyLinear::initialised(Index inputs, Index outputs, double sigma0, Rng& rng) {
  NoisyLinear layer(inputs, outputs);
  const double bound = 1.0 / std::sqrt(static_cast<double>(inputs));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (Index r = 0; r < outputs; ++r)
    for (Index c = 0; c < inputs; ++c) layer.mu_w_(r, c) = dist(rng);
  for (Index r = 0; r < outputs; ++r) layer.mu_b_(r) = dist(rng);
  layer.sigma_w_.setConstant(sigma0 * bound);
  layer.sigma_b_.setConstant(sigma0 * bound);
  return layer;
}

void NoisyLinear::sample_noise(Rng& rng) { set_noise(NoiseDraw::sample(inputs(), outputs(), rng)); }

void NoisyLinear::set_noise(const NoiseDraw& draw) {
  require_shape(draw.eps_in.size() == inputs() && draw.eps_out.size() == outputs(),
                "NoisyLinear::set_noise: draw shape mismatch");
  const RealVector f_in = draw.eps_in.unaryExpr(&factorise);
  const RealVector f_out = draw.eps_out.unaryExpr(&factorise);
  // f(a*b) = f(a)*f(b), so the factorised weight noise is an outer product.
  eps_w_.noalias() = f_out * f_in.transpose();
  eps_b_ = f_out;
}

void NoisyLinear::zero_noise() {
  eps_w_.setZero();
  eps_b_.setZero();
}

RealMatrix NoisyLinear::effective_weights() const { return mu_w_ + sigma_w_.cwiseProduct(eps_w_); }

RealVector NoisyLinear::effective_bias() const { return mu_b_ + sigma_b_.cwiseProduct(eps_b_); }

RealVector NoisyLinear::forward(const RealVector& x) {
  Batch out = forward(Batch(x));
  return out.col(0);
}

Batch NoisyLinear::forward(const Batch& x) {
  require_shape(x.rows() == inputs(), "noisy_forward: expected input of length " +
                                          std::to_string(inputs()) + ", got " +
                                          std::to_string(x.rows()));
  cached_input_ = x;
  cached_weights_ = effective_weights();
  cached_eps_w_ = eps_w_;
  cached_eps_b_ = eps_b_;
  has_cache_ = true;
  Batch y = cached_weights_ * x;
  y.colwise() += effective_bias();
  return y;
}

NoisyGrads NoisyLinear::backward(const Batch& upstream) const {
  if (!has_cache_) throw StateError("noisy_backward called before forward");
  require_shape(upstream.rows() == outputs() && upstream.cols() == cached_input_.cols(),
                "noisy_backward: upstream shape does not match the cached forward pass");
  NoisyGrads g;
  g.mu_w = upstream * cached_input_.transpose();
  g.sigma_w = g.mu_w.cwiseProduct(cached_eps_w_);
  g.mu_b = upstream.rowwise().sum();
  g.sigma_b = g.mu_b.cwiseProduct(cached_eps_b_);
  g.input = cached_weights_.transpose() * upstream;
  return g;
}

double stability(const NoisyLinear& layer) {
  const double terms = static_cast<double>((layer.inputs() + 1) * layer.outputs());
  return (layer.sigma_w().cwiseAbs().sum() + layer.sigma_b().cwiseAbs().sum()) / terms;
}

StabilityGrad stability_gradient(const NoisyLinear& layer) {
  const double terms = static_cast<double>((layer.inputs() + 1) * layer.outputs());
  auto sgn = [terms](double s) { return sign(s) / terms; };
  return {layer.sigma_w().unaryExpr(sgn), layer.sigma_b().unaryExpr(sgn)};
}

}  // namespace noisyq
