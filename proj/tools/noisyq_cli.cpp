// noisyq: command-line experiment runner.
//
//   noisyq run     --algo nrowan --env cartpole --seeds 1-5 [--frames N] ...
//   noisyq compare --env cartpole [--env mountaincar ...]
//   noisyq sweep   --env cartpole --k-final 2,4,6 --lr 1e-4,5e-5 --seeds 1-5
//   noisyq curves  --env cartpole [--window 10]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "noisyq/harness/config.hpp"
#include "noisyq/harness/experiment.hpp"
#include "noisyq/harness/report.hpp"

using namespace noisyq;
using namespace noisyq::harness;

namespace {

struct RunFlags {
  std::string config_file;
  std::string algo = "nrowan";
  std::string env = "cartpole";
  std::string seeds = "1-5";
  std::optional<long> frames;
  std::optional<double> k_final;
  std::optional<double> lr;
  std::optional<std::string> schedule;
  std::optional<long> eval_episodes;
  std::string out;
  int jobs = 1;
};

void add_common(CLI::App* cmd, RunFlags& f, bool sweep) {
  cmd->add_option("--config", f.config_file, "Key-value config file (flags override it)");
  cmd->add_option("--algo", f.algo, "dqn | noisynet | nrowan");
  cmd->add_option("--env", f.env, "cartpole | mountaincar | acrobot");
  cmd->add_option("--seeds", f.seeds, "Seed list, e.g. 1,2,3 or 1-5");
  cmd->add_option("--frames", f.frames, "Training frame budget");
  if (!sweep) {
    cmd->add_option("--k-final", f.k_final, "Ceiling of the noise-reduction weight");
    cmd->add_option("--lr", f.lr, "Adam learning rate");
  }
  cmd->add_option("--schedule", f.schedule, "reward | frame | none");
  cmd->add_option("--eval-episodes", f.eval_episodes, "Evaluation episodes per seed");
  cmd->add_option("--out", f.out, "Output root (default $NOISYQ_OUT or ./runs)");
  cmd->add_option("--jobs", f.jobs, "Seeds trained concurrently")->check(CLI::PositiveNumber);
}

ExperimentConfig build_config(const RunFlags& f, const CLI::App& cmd) {
  std::map<std::string, std::string> entries;
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) throw IoError("cannot read config file " + f.config_file);
    entries = parse_key_value(in);
  }
  if (cmd.count("--algo") || !entries.count("algo")) entries["algo"] = f.algo;
  if (cmd.count("--env") || !entries.count("env")) entries["env"] = f.env;
  if (cmd.count("--seeds") || !entries.count("seeds")) entries["seeds"] = f.seeds;
  if (f.frames) entries["frames"] = std::to_string(*f.frames);
  if (f.k_final) entries["k_final"] = format_real(*f.k_final);
  if (f.lr) entries["lr"] = format_real(*f.lr);
  if (f.schedule) entries["schedule"] = *f.schedule;
  if (f.eval_episodes) entries["eval_episodes"] = std::to_string(*f.eval_episodes);
  if (!f.out.empty()) entries["out"] = f.out;
  if (!entries.count("out")) entries["out"] = default_output_root().string();
  return experiment_from_map(entries);
}

void print_seed(const SeedSummary& s) {
  std::printf("  seed %llu: %s  (final D %.4f)\n", static_cast<unsigned long long>(s.seed),
              format_score(s.mean, s.std).c_str(), s.final_stability);
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noisyq: DQN / NoisyNet-DQN / NROWAN-DQN experiment runner"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Train and evaluate one algorithm over several seeds");
  add_common(run, run_flags, false);

  std::vector<std::string> compare_envs;
  std::string compare_out;
  auto* cmp = app.add_subcommand("compare", "Print a mean±std table for the three algorithms");
  cmp->add_option("--env", compare_envs, "Environment(s) to tabulate")->required();
  cmp->add_option("--out", compare_out, "Output root holding the runs");

  RunFlags sweep_flags;
  std::vector<double> sweep_k{2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0};
  std::vector<double> sweep_lr{1e-4, 7.5e-5, 5e-5, 2.5e-5};
  auto* swp = app.add_subcommand("sweep", "Grid over k_final x learning rate");
  add_common(swp, sweep_flags, true);
  swp->add_option("--k-final", sweep_k, "k_final values")->delimiter(',');
  swp->add_option("--lr", sweep_lr, "Learning rates")->delimiter(',');

  std::string curves_env = "cartpole";
  std::string curves_out;
  std::size_t window = 10;
  auto* crv = app.add_subcommand("curves", "Write smoothed learning curves for plotting");
  crv->add_option("--env", curves_env, "Environment");
  crv->add_option("--out", curves_out, "Output root holding the runs");
  crv->add_option("--window", window, "Trailing smoothing window (episodes)")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const ExperimentConfig cfg = build_config(run_flags, *run);
      std::printf("%s on %s, %zu seed(s), %ld frames\n", std::string(to_string(cfg.algorithm)).c_str(),
                  std::string(to_string(cfg.environment)).c_str(), cfg.seeds.size(),
                  cfg.agent.frame_budget);
      const auto summary = run_experiment(cfg, run_flags.jobs, print_seed);
      std::printf("aggregate: %s  -> %s\n",
                  format_score(summary.aggregate.mean, summary.aggregate.std).c_str(),
                  aggregate_file(summary.run_dir).string().c_str());
    } else if (cmp->parsed()) {
      const auto root = compare_out.empty() ? default_output_root() : std::filesystem::path(compare_out);
      std::vector<ComparisonRow> rows;
      for (const auto& e : compare_envs) rows.push_back(compare(root, parse_env_kind(e)));
      std::cout << format_comparison(rows);
    } else if (swp->parsed()) {
      const ExperimentConfig cfg = build_config(sweep_flags, *swp);
      const auto cells = sweep(cfg, sweep_k, sweep_lr, sweep_flags.jobs);
      for (const auto& c : cells)
        std::printf("k_final %-5s lr %-8s %s\n", format_real(c.k_final).c_str(),
                    format_real(c.learning_rate).c_str(), format_score(c.mean, c.std).c_str());
    } else if (crv->parsed()) {
      const auto root = curves_out.empty() ? default_output_root() : std::filesystem::path(curves_out);
      for (const auto& f : emit_curves(root, parse_env_kind(curves_env), window))
        std::cout << f.string() << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
