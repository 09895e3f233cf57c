#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "noisyq/harness/metrics_io.hpp"

namespace noisyq::harness {

struct ComparisonEntry {
  Algorithm algorithm;
  double mean = 0.0;
  double std = 0.0;
  bool best = false;
};

struct ComparisonRow {
  EnvKind environment;
  std::vector<ComparisonEntry> entries;  // dqn, noisynet, nrowan
};

/// Builds one row from the three aggregates of `env` under `root`. Every
/// algorithm whose mean equals the highest mean is flagged best. Throws
/// NotReadyError if any aggregate is missing.
ComparisonRow compare(const std::filesystem::path& root, EnvKind env);

/// "187.04±13.99"
std::string format_score(double mean, double std);

/// Fixed-width text table; best entries carry a trailing '*'.
std::string format_comparison(const std::vector<ComparisonRow>& rows);

/// Trailing mean over `window` consecutive values; the result has
/// values.size() - window + 1 entries (none if there are fewer values).
std::vector<double> smooth_trailing(const std::vector<double>& values, std::size_t window);

struct CurvePoint {
  std::uint64_t seed;
  long episode;  // index of the last episode in the window
  long frame;
  double smoothed_return;
};

/// Smoothed return-vs-frame series for every seed of one run directory.
std::vector<CurvePoint> curve_for_run(const std::filesystem::path& run_dir, std::size_t window);

/// Writes `<root>/curves_<algo>_<env>.csv` for each algorithm with results
/// under `root`; returns the files written. Throws NotReadyError if none.
std::vector<std::filesystem::path> emit_curves(const std::filesystem::path& root, EnvKind env,
                                               std::size_t window = 10);

}  // namespace noisyq::harness
