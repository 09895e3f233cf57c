#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace noisyq {

struct AdamOptions {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 0.0;
};

/// Moment estimates for one parameter group.
///
/// With epsilon = 0 a coordinate whose bias-corrected second moment is exactly
/// zero receives no update instead of 0/0.
class AdamState {
 public:
  AdamState(std::size_t size, AdamOptions options);

  /// Applies one descent step: params -= lr * m_hat / (sqrt(v_hat) + eps).
  void step(std::span<double> params, std::span<const double> grads);

  std::size_t size() const { return first_moment_.size(); }
  std::uint64_t step_count() const { return step_count_; }
  const std::vector<double>& first_moment() const { return first_moment_; }
  const std::vector<double>& second_moment() const { return second_moment_; }
  const AdamOptions& options() const { return options_; }
  void set_learning_rate(double lr) { options_.learning_rate = lr; }

 private:
  AdamOptions options_;
  std::vector<double> first_moment_;
  std::vector<double> second_moment_;
  std::uint64_t step_count_ = 0;
};

}  // namespace noisyq
