#include "noisyq/harness/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "noisyq/harness/experiment.hpp"

namespace noisyq::harness {

namespace {

constexpr Algorithm kAlgorithms[] = {Algorithm::dqn, Algorithm::noisynet, Algorithm::nrowan};

std::string display_name(Algorithm a) {
  switch (a) {
    case Algorithm::dqn: return "DQN";
    case Algorithm::noisynet: return "NoisyNet-DQN";
    case Algorithm::nrowan: return "NROWAN-DQN";
  }
  return "?";
}

std::vector<std::uint64_t> seeds_in(const std::filesystem::path& run_dir) {
  std::vector<std::uint64_t> seeds;
  if (!std::filesystem::is_directory(run_dir)) return seeds;
  for (const auto& entry : std::filesystem::directory_iterator(run_dir)) {
    const std::string name = entry.path().filename().string();
    const std::string prefix = "seed_", suffix = ".episodes.csv";
    if (name.size() > prefix.size() + suffix.size() && name.starts_with(prefix) &&
        name.ends_with(suffix)) {
      seeds.push_back(std::stoull(name.substr(prefix.size())));
    }
  }
  std::sort(seeds.begin(), seeds.end());
  return seeds;
}

}  // namespace

ComparisonRow compare(const std::filesystem::path& root, EnvKind env) {
  ComparisonRow row{env, {}};
  for (Algorithm a : kAlgorithms) {
    const Aggregate agg = read_aggregate(aggregate_file(run_directory(root, a, env)));
    row.entries.push_back({a, agg.mean, agg.std, false});
  }
  double best = row.entries.front().mean;
  for (const auto& e : row.entries) best = std::max(best, e.mean);
  for (auto& e : row.entries) e.best = e.mean == best;
  return row;
}

std::string format_score(double mean, double std) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f±%.2f", mean, std);
  return buf;
}

std::string format_comparison(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  auto cell = [&out](const std::string& text, std::size_t visible) {
    out << text << std::string(visible < 18 ? 18 - visible : 1, ' ');
  };
  cell("Problem", 7);
  for (Algorithm a : kAlgorithms) cell(display_name(a), display_name(a).size());
  out << '\n';
  for (const auto& row : rows) {
    const std::string env(to_string(row.environment));
    cell(env, env.size());
    for (const auto& e : row.entries) {
      std::string s = format_score(e.mean, e.std);
      if (e.best) s += '*';
      // '±' is two bytes but one column.
      cell(s, s.size() - 1);
    }
    out << '\n';
  }
  return out.str();
}

std::vector<double> smooth_trailing(const std::vector<double>& values, std::size_t window) {
  if (window == 0) throw ConfigError("window", "must be positive");
  std::vector<double> out;
  if (values.size() < window) return out;
  out.reserve(values.size() - window + 1);
  // Each window is summed afresh so a constant series stays exactly constant.
  for (std::size_t end = window; end <= values.size(); ++end) {
    double sum = 0.0;
    for (std::size_t j = end - window; j < end; ++j) sum += values[j];
    out.push_back(sum / static_cast<double>(window));
  }
  return out;
}

std::vector<CurvePoint> curve_for_run(const std::filesystem::path& run_dir, std::size_t window) {
  std::vector<CurvePoint> points;
  for (std::uint64_t seed : seeds_in(run_dir)) {
    const auto rows = read_episodes(episodes_file(run_dir, seed));
    std::vector<double> returns;
    returns.reserve(rows.size());
    for (const auto& r : rows) returns.push_back(r.episode_return);
    const auto smooth = smooth_trailing(returns, window);
    for (std::size_t i = 0; i < smooth.size(); ++i) {
      const auto& last = rows[i + window - 1];
      points.push_back({seed, last.episode, last.frame, smooth[i]});
    }
  }
  return points;
}

std::vector<std::filesystem::path> emit_curves(const std::filesystem::path& root, EnvKind env,
                                               std::size_t window) {
  std::vector<std::filesystem::path> written;
  for (Algorithm a : kAlgorithms) {
    const auto dir = run_directory(root, a, env);
    if (seeds_in(dir).empty()) continue;
    const auto points = curve_for_run(dir, window);
    const auto file =
        root / ("curves_" + std::string(to_string(a)) + "_" + std::string(to_string(env)) + ".csv");
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + file.string());
    out << kCurveHeader << '\n';
    for (const auto& p : points)
      out << p.seed << ',' << p.episode << ',' << p.frame << ',' << format_real(p.smoothed_return)
          << '\n';
    if (!out) throw IoError("error while writing " + file.string());
    written.push_back(file);
  }
  if (written.empty())
    throw NotReadyError("no episode metrics for " + std::string(to_string(env)) + " under " +
                        root.string());
  return written;
}

}  // namespace noisyq::harness
