#pragma once

#include "noisyq/tensor.hpp"

namespace noisyq {

/// sgn(x) * sqrt(|x|), the factorised-noise shaping function.
double factorise(double x);

/// Raw unit Gaussians for one factorised draw: one per input, one per output.
struct NoiseDraw {
  RealVector eps_in;
  RealVector eps_out;

  static NoiseDraw sample(Index inputs, Index outputs, Rng& rng);
};

struct NoisyGrads {
  RealMatrix mu_w;
  RealMatrix sigma_w;
  RealVector mu_b;
  RealVector sigma_b;
  Batch input;
};

/// Linear layer whose weights and biases are perturbed by learnable-scale
/// factorised Gaussian noise:
///
///   y = (mu_w + sigma_w . eps_w) x + (mu_b + sigma_b . eps_b)
///
/// The noise is held in the layer and reused by every forward pass until the
/// next sample_noise()/set_noise()/zero_noise(). A freshly constructed layer
/// has zero noise.
class NoisyLinear {
 public:
  NoisyLinear(Index inputs, Index outputs);

  /// mu ~ U(+-1/sqrt(p)), sigma = sigma0/sqrt(p), p = inputs.
  static NoisyLinear initialised(Index inputs, Index outputs, double sigma0, Rng& rng);

  Index inputs() const { return mu_w_.cols(); }
  Index outputs() const { return mu_w_.rows(); }

  void sample_noise(Rng& rng);
  void set_noise(const NoiseDraw& draw);
  void zero_noise();

  RealVector forward(const RealVector& x);
  Batch forward(const Batch& x);
  NoisyGrads backward(const Batch& upstream) const;

  /// mu + sigma . eps with the current noise.
  RealMatrix effective_weights() const;
  RealVector effective_bias() const;

  RealMatrix& mu_w() { return mu_w_; }
  RealMatrix& sigma_w() { return sigma_w_; }
  RealVector& mu_b() { return mu_b_; }
  RealVector& sigma_b() { return sigma_b_; }
  const RealMatrix& mu_w() const { return mu_w_; }
  const RealMatrix& sigma_w() const { return sigma_w_; }
  const RealVector& mu_b() const { return mu_b_; }
  const RealVector& sigma_b() const { return sigma_b_; }
  const RealMatrix& eps_w() const { return eps_w_; }
  const RealVector& eps_b() const { return eps_b_; }

 private:
  RealMatrix mu_w_;
  RealMatrix sigma_w_;
  RealVector mu_b_;
  RealVector sigma_b_;
  RealMatrix eps_w_;
  RealVector eps_b_;
  RealMatrix cached_weights_;
  RealMatrix cached_eps_w_;
  RealVector cached_eps_b_;
  Batch cached_input_;
  bool has_cache_ = false;
};

struct StabilityGrad {
  RealMatrix sigma_w;
  RealVector sigma_b;
};

/// Mean absolute noise scale of an output layer:
///   D = (sum |sigma_w| + sum |sigma_b|) / ((p + 1) * n_actions)
double stability(const NoisyLinear& output_layer);

/// dD/dsigma = sgn(sigma) / ((p + 1) * n_actions), 0 where sigma is 0.
StabilityGrad stability_gradient(const NoisyLinear& output_layer);

}  // namespace noisyq
