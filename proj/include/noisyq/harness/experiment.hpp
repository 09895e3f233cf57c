#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "noisyq/harness/config.hpp"
#include "noisyq/harness/metrics_io.hpp"

namespace noisyq::harness {

struct ExperimentSummary {
  std::filesystem::path run_dir;
  std::vector<SeedSummary> seeds;
  Aggregate aggregate;
};

/// `<root>/<algo>_<env>`
std::filesystem::path run_directory(const std::filesystem::path& root, Algorithm algo, EnvKind env);

std::filesystem::path episodes_file(const std::filesystem::path& run_dir, std::uint64_t seed);
std::filesystem::path frames_file(const std::filesystem::path& run_dir, std::uint64_t seed);
std::filesystem::path eval_file(const std::filesystem::path& run_dir, std::uint64_t seed);
std::filesystem::path aggregate_file(const std::filesystem::path& run_dir);

/// Mean of per-seed means and mean of per-seed standard deviations.
Aggregate aggregate_seeds(std::string algo, std::string env, const std::vector<SeedSummary>& seeds);

/// Called as each seed finishes; may be invoked from worker threads, but
/// never concurrently.
using ProgressFn = std::function<void(const SeedSummary&)>;

/// Trains and evaluates one agent per seed and writes, under
/// run_directory(config.output_dir, ...), per-seed episode/frame/evaluation
/// files plus aggregate.csv. Up to `jobs` seeds run concurrently.
ExperimentSummary run_experiment(const ExperimentConfig& config, int jobs = 1,
                                 const ProgressFn& progress = {});

/// Evaluation-episode seed used for training seed `seed`.
std::uint64_t evaluation_seed(std::uint64_t seed);

/// One run_experiment per (k_final, learning rate) cell, each under
/// `<out>/sweep_<env>/k<k>_lr<lr>`, then `<out>/sweep_<env>/grid.csv`.
std::vector<GridCell> sweep(const ExperimentConfig& base, const std::vector<double>& k_finals,
                            const std::vector<double>& learning_rates, int jobs = 1);

}  // namespace noisyq::harness
