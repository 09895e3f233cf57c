#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace noisyq {

/// One block of parameters together with the analytic gradient of the loss
/// with respect to it, both laid out flat.
struct GradientBlock {
  std::span<double> values;
  std::span<const double> analytic;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_block = 0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;

  bool within(double tolerance) const { return max_relative_error <= tolerance; }
};

/// Compares analytic gradients against central differences of `loss`.
///
/// Each parameter is perturbed in place by +-step and restored afterwards. The
/// per-coordinate error is |a - n| / max(1e-8, |a| + |n|). Throws NumericError
/// if the loss is ever non-finite.
GradCheckResult finite_diff_check(std::span<const GradientBlock> blocks,
                                  const std::function<double()>& loss, double step = 1e-6);

}  // namespace noisyq
