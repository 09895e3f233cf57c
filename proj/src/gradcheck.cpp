#include "noisyq/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "noisyq/errors.hpp"

namespace noisyq {

namespace {

double checked(const std::function<double()>& loss) {
  const double v = loss();
  if (!std::isfinite(v)) throw NumericError("finite_diff_check: loss is not finite");
  return v;
}

}  // namespace

GradCheckResult finite_diff_check(std::span<const GradientBlock> blocks,
                                  const std::function<double()>& loss, double step) {
  GradCheckResult result;
  bool seen = false;
  checked(loss);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    if (block.values.size() != block.analytic.size())
      throw ShapeError("finite_diff_check: block " + std::to_string(b) + " size mismatch");
    for (std::size_t i = 0; i < block.values.size(); ++i) {
      const double saved = block.values[i];
      block.values[i] = saved + step;
      const double up = checked(loss);
      block.values[i] = saved - step;
      const double down = checked(loss);
      block.values[i] = saved;

      const double numeric = (up - down) / (2.0 * step);
      const double analytic = block.analytic[i];
      const double err =
          std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
      if (err > result.max_relative_error || !seen) {
        seen = true;
        result.max_relative_error = err;
        result.worst_block = b;
        result.worst_index = i;
        result.worst_analytic = analytic;
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace noisyq
