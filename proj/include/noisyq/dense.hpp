#pragma once

#include "noisyq/tensor.hpp"

namespace noisyq {

struct DenseGrads {
  RealMatrix weights;
  RealVector bias;
  Batch input;
};

/// Plain fully connected layer y = W x + b.
///
/// Batched calls treat each column of the input as one sample; gradients
/// returned by backward() are summed over the batch.
class DenseLayer {
 public:
  DenseLayer(Index inputs, Index outputs);

  /// Weights and bias drawn uniformly from +-1/sqrt(fan_in).
  static DenseLayer uniform(Index inputs, Index outputs, Rng& rng);

  Index inputs() const { return weights_.cols(); }
  Index outputs() const { return weights_.rows(); }

  RealVector forward(const RealVector& x);
  Batch forward(const Batch& x);

  DenseGrads backward(const Batch& upstream) const;
  RealVector backward_input(const RealVector& upstream) const;

  RealMatrix& weights() { return weights_; }
  const RealMatrix& weights() const { return weights_; }
  RealVector& bias() { return bias_; }
  const RealVector& bias() const { return bias_; }

 private:
  RealMatrix weights_;
  RealVector bias_;
  Batch cached_input_;
  bool has_cache_ = false;
};

RealVector relu(const RealVector& x);

/// Gradient of relu at `x`; the subgradient at exactly 0 is taken as 0.
RealVector relu_backward(const RealVector& x, const RealVector& upstream);

/// Stateful ReLU for use between layers; remembers its last input.
class Relu {
 public:
  Batch forward(const Batch& x);
  Batch backward(const Batch& upstream) const;

 private:
  Batch cached_input_;
  bool has_cache_ = false;
};

}  // namespace noisyq
