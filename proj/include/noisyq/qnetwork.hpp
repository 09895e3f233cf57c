#pragma once

#include <span>
#include <string>
#include <vector>

#include "noisyq/dense.hpp"
#include "noisyq/noisy_linear.hpp"

namespace noisyq {

/// A flat view of one learnable tensor and its gradient accumulator.
struct ParamGroup {
  std::string name;
  std::span<double> value;
  std::span<double> grad;
};

/// Fully connected Q-function: linear / ReLU / ... / linear.
///
/// Built either from plain DenseLayers or from NoisyLinear layers; the last
/// layer has one output per action and no activation.
class QNetwork {
 public:
  QNetwork(Index inputs, int actions, const std::vector<Index>& hidden, bool noisy, double sigma0,
           Rng& init_rng);

  bool noisy() const { return !noisy_.empty(); }
  Index input_size() const;
  int action_count() const;
  std::size_t layer_count() const { return noisy() ? noisy_.size() : dense_.size(); }

  Batch forward(const Batch& x);
  RealVector q_values(const RealVector& obs);

  /// Backpropagates dLoss/dQ and adds the result into the gradient buffers.
  void backward(const Batch& upstream);
  void zero_grad();

  void sample_noise(Rng& rng);
  void zero_noise();

  /// Learnable tensors in a fixed order: per layer w/mu_w, b/mu_b and, for
  /// noisy layers, sigma_w, sigma_b.
  std::vector<ParamGroup> parameters();

  NoisyLinear& output_layer();
  const NoisyLinear& output_layer() const;
  NoisyLinear& noisy_layer(std::size_t i) { return noisy_.at(i); }
  const NoisyLinear& noisy_layer(std::size_t i) const { return noisy_.at(i); }
  DenseLayer& dense_layer(std::size_t i) { return dense_.at(i); }
  const DenseLayer& dense_layer(std::size_t i) const { return dense_.at(i); }

  /// Copies every learnable parameter from `other`. Noise is left untouched.
  void copy_parameters_from(const QNetwork& other);

  bool same_structure(const QNetwork& other) const;

 private:
  struct LayerGrads {
    RealMatrix w;
    RealVector b;
    RealMatrix sigma_w;
    RealVector sigma_b;
  };

  std::vector<DenseLayer> dense_;
  std::vector<NoisyLinear> noisy_;
  std::vector<Relu> activations_;
  std::vector<LayerGrads> grads_;
};

}  // namespace noisyq
