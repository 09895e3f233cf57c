#include "noisyq/dense.hpp"

#include <cmath>

namespace noisyq {

DenseLayer::DenseLayer(Index inputs, Index outputs)
    : weights_(RealMatrix::Zero(outputs, inputs)), bias_(RealVector::Zero(outputs)) {
  require_shape(inputs > 0 && outputs > 0, "DenseLayer: dimensions must be positive");
}

DenseLayer DenseLayer::uniform(Index inputs, Index outputs, Rng& rng) {
  DenseLayer layer(inputs, outputs);
  const double bound = 1.0 / std::sqrt(static_cast<double>(inputs));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (Index r = 0; r < outputs; ++r)
    for (Index c = 0; c < inputs; ++c) layer.weights_(r, c) = dist(rng);
  for (Index r = 0; r < outputs; ++r) layer.bias_(r) = dist(rng);
  return layer;
}

RealVector DenseLayer::forward(const RealVector& x) {
  Batch out = forward(Batch(x));
  return out.col(0);
}

Batch DenseLayer::forward(const Batch& x) {
  require_shape(x.rows() == inputs(), "dense_forward: expected input of length " +
                                          std::to_string(inputs()) + ", got " +
                                          std::to_string(x.rows()));
  cached_input_ = x;
  has_cache_ = true;
  Batch y = weights_ * x;
  y.colwise() += bias_;
  return y;
}

DenseGrads DenseLayer::backward(const Batch& upstream) const {
  if (!has_cache_) throw StateError("dense_backward called before forward");
  require_shape(upstream.rows() == outputs() && upstream.cols() == cached_input_.cols(),
                "dense_backward: upstream shape does not match the cached forward pass");
  DenseGrads g;
  g.weights = upstream * cached_input_.transpose();
  g.bias = upstream.rowwise().sum();
  g.input = weights_.transpose() * upstream;
  return g;
}

RealVector DenseLayer::backward_input(const RealVector& upstream) const {
  return backward(Batch(upstream)).input.col(0);
}

RealVector relu(const RealVector& x) { return x.cwiseMax(0.0); }

RealVector relu_backward(const RealVector& x, const RealVector& upstream) {
  require_shape(x.size() == upstream.size(), "relu_backward: size mismatch");
  return (x.array() > 0.0).select(upstream, 0.0);
}

Batch Relu::forward(const Batch& x) {
  cached_input_ = x;
  has_cache_ = true;
  return x.cwiseMax(0.0);
}

Batch Relu::backward(const Batch& upstream) const {
  if (!has_cache_) throw StateError("relu backward called before forward");
  require_shape(upstream.rows() == cached_input_.rows() && upstream.cols() == cached_input_.cols(),
                "relu backward: upstream shape mismatch");
  return (cached_input_.array() > 0.0).select(upstream, 0.0);
}

}  // namespace noisyq
