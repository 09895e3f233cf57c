#include "noisyq/harness/experiment.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace noisyq::harness {

std::filesystem::path run_directory(const std::filesystem::path& root, Algorithm algo, EnvKind env) {
  return root / (std::string(to_string(algo)) + "_" + std::string(to_string(env)));
}

std::filesystem::path episodes_file(const std::filesystem::path& dir, std::uint64_t seed) {
  return dir / ("seed_" + std::to_string(seed) + ".episodes.csv");
}

std::filesystem::path frames_file(const std::filesystem::path& dir, std::uint64_t seed) {
  return dir / ("seed_" + std::to_string(seed) + ".frames.csv");
}

std::filesystem::path eval_file(const std::filesystem::path& dir, std::uint64_t seed) {
  return dir / ("seed_" + std::to_string(seed) + ".eval.csv");
}

std::filesystem::path aggregate_file(const std::filesystem::path& dir) {
  return dir / "aggregate.csv";
}

std::uint64_t evaluation_seed(std::uint64_t seed) { return seed ^ 0x9e3779b97f4a7c15ULL; }

Aggregate aggregate_seeds(std::string algo, std::string env, const std::vector<SeedSummary>& seeds) {
  Aggregate a{std::move(algo), std::move(env), 0.0, 0.0, {}};
  if (seeds.empty()) throw NotReadyError("aggregate_seeds: no seed results");
  for (const auto& s : seeds) {
    a.mean += s.mean;
    a.std += s.std;
    a.seeds.push_back(s.seed);
  }
  a.mean /= static_cast<double>(seeds.size());
  a.std /= static_cast<double>(seeds.size());
  return a;
}

namespace {

SeedSummary run_seed(const ExperimentConfig& config, const std::filesystem::path& dir,
                     std::uint64_t seed) {
  auto env = make_environment(config.environment);
  TrainResult result = train(*env, config.algorithm, config.agent, seed);
  const double eval_epsilon =
      config.algorithm == Algorithm::dqn ? config.agent.epsilon_final : 0.0;
  const Evaluation eval = evaluate(result.online, *env, config.agent.eval_episodes,
                                   evaluation_seed(seed), eval_epsilon);

  SeedSummary s{seed,
                eval.mean,
                eval.std,
                config.agent.eval_episodes,
                result.metrics.initial_stability,
                result.metrics.final_stability};
  write_episodes(episodes_file(dir, seed), result.metrics.episodes);
  write_frames(frames_file(dir, seed), result.metrics.frames);
  write_seed_summary(eval_file(dir, seed), s);
  return s;
}

void ensure_writable(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : std::string()));
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config, int jobs,
                                 const ProgressFn& progress) {
  config.validate();
  if (config.output_dir.empty()) throw ConfigError("out", "output directory is required");

  ExperimentSummary summary;
  summary.run_dir = run_directory(config.output_dir, config.algorithm, config.environment);
  ensure_writable(summary.run_dir);

  const std::size_t n = config.seeds.size();
  summary.seeds.resize(n);
  std::atomic<std::size_t> next{0};
  std::mutex report_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        summary.seeds[i] = run_seed(config, summary.run_dir, config.seeds[i]);
        if (progress) {
          std::lock_guard lock(report_mutex);
          progress(summary.seeds[i]);
        }
      } catch (...) {
        std::lock_guard lock(report_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  summary.aggregate = aggregate_seeds(std::string(to_string(config.algorithm)),
                                      std::string(to_string(config.environment)), summary.seeds);
  write_aggregate(aggregate_file(summary.run_dir), summary.aggregate);
  return summary;
}

std::vector<GridCell> sweep(const ExperimentConfig& base, const std::vector<double>& k_finals,
                            const std::vector<double>& learning_rates, int jobs) {
  if (k_finals.empty()) throw ConfigError("k_final", "sweep needs at least one value");
  if (learning_rates.empty()) throw ConfigError("lr", "sweep needs at least one value");
  if (base.output_dir.empty()) throw ConfigError("out", "output directory is required");

  const auto sweep_dir = base.output_dir / ("sweep_" + std::string(to_string(base.environment)));
  std::vector<GridCell> cells;
  for (double lr : learning_rates) {
    for (double k : k_finals) {
      ExperimentConfig cell = base;
      cell.agent.k_final = k;
      cell.agent.learning_rate = lr;
      cell.output_dir = sweep_dir / ("k" + format_real(k) + "_lr" + format_real(lr));
      const ExperimentSummary s = run_experiment(cell, jobs);
      cells.push_back({k, lr, s.aggregate.mean, s.aggregate.std});
    }
  }
  write_grid(sweep_dir / "grid.csv", cells);
  return cells;
}

}  // namespace noisyq::harness
