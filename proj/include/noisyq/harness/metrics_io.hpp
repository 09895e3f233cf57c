#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "noisyq/trainer.hpp"

namespace noisyq::harness {

inline constexpr const char* kEpisodeHeader = "episode,frame,return,length";
inline constexpr const char* kFrameHeader = "frame,k,D,loss";
inline constexpr const char* kEvalHeader = "seed,mean,std,episodes,initial_D,final_D";
inline constexpr const char* kAggregateHeader = "algo,env,mean,std,seeds";
inline constexpr const char* kGridHeader = "k_final,lr,mean,std";
inline constexpr const char* kCurveHeader = "seed,episode,frame,smoothed_return";

/// Shortest decimal text that round-trips to the same double.
std::string format_real(double v);
double parse_real(const std::string& text);

struct SeedSummary {
  std::uint64_t seed = 0;
  double mean = 0.0;
  double std = 0.0;
  long episodes = 0;
  double initial_stability = 0.0;
  double final_stability = 0.0;
};

struct Aggregate {
  std::string algo;
  std::string env;
  double mean = 0.0;  // mean of per-seed means
  double std = 0.0;   // mean of per-seed standard deviations
  std::vector<std::uint64_t> seeds;
};

struct GridCell {
  double k_final = 0.0;
  double learning_rate = 0.0;
  double mean = 0.0;
  double std = 0.0;
};

void write_episodes(const std::filesystem::path& file, const std::vector<EpisodeRow>& rows);
void write_frames(const std::filesystem::path& file, const std::vector<FrameRow>& rows);
void write_seed_summary(const std::filesystem::path& file, const SeedSummary& summary);
void write_aggregate(const std::filesystem::path& file, const Aggregate& aggregate);
void write_grid(const std::filesystem::path& file, const std::vector<GridCell>& cells);

std::vector<EpisodeRow> read_episodes(const std::filesystem::path& file);
std::vector<FrameRow> read_frames(const std::filesystem::path& file);
SeedSummary read_seed_summary(const std::filesystem::path& file);
Aggregate read_aggregate(const std::filesystem::path& file);
std::vector<GridCell> read_grid(const std::filesystem::path& file);

/// Splits a CSV file into rows of fields after checking the header line.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& file,
                                               const std::string& expected_header);

}  // namespace noisyq::harness
