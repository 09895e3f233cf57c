#include "noisyq/harness/metrics_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace noisyq::harness {

namespace {

std::ofstream open_for_write(const std::filesystem::path& file) {
  std::error_code ec;
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path(), ec);
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + file.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& file) {
  out.flush();
  if (!out) throw IoError("error while writing " + file.string());
}

long parse_count(const std::string& text) {
  long v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size())
    throw IoError("malformed integer field '" + text + "'");
  return v;
}

std::string join_seeds(const std::vector<std::uint64_t>& seeds) {
  std::string s;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(seeds[i]);
  }
  return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

void expect_fields(const std::vector<std::string>& row, std::size_t n,
                   const std::filesystem::path& file) {
  if (row.size() != n)
    throw IoError(file.string() + ": expected " + std::to_string(n) + " fields, got " +
                  std::to_string(row.size()));
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double parse_real(const std::string& text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size())
    throw IoError("malformed number '" + text + "'");
  return v;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& file,
                                               const std::string& expected_header) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw NotReadyError("missing metrics file " + file.string());
  std::string line;
  if (!std::getline(in, line) || line != expected_header)
    throw IoError(file.string() + ": expected header '" + expected_header + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(split(line, ','));
  }
  return rows;
}

void write_episodes(const std::filesystem::path& file, const std::vector<EpisodeRow>& rows) {
  auto out = open_for_write(file);
  out << kEpisodeHeader << '\n';
  for (const auto& r : rows)
    out << r.episode << ',' << r.frame << ',' << format_real(r.episode_return) << ',' << r.length
        << '\n';
  finish(out, file);
}

void write_frames(const std::filesystem::path& file, const std::vector<FrameRow>& rows) {
  auto out = open_for_write(file);
  out << kFrameHeader << '\n';
  for (const auto& r : rows)
    out << r.frame << ',' << format_real(r.k) << ',' << format_real(r.stability) << ','
        << format_real(r.loss) << '\n';
  finish(out, file);
}

void write_seed_summary(const std::filesystem::path& file, const SeedSummary& s) {
  auto out = open_for_write(file);
  out << kEvalHeader << '\n'
      << s.seed << ',' << format_real(s.mean) << ',' << format_real(s.std) << ',' << s.episodes
      << ',' << format_real(s.initial_stability) << ',' << format_real(s.final_stability) << '\n';
  finish(out, file);
}

void write_aggregate(const std::filesystem::path& file, const Aggregate& a) {
  auto out = open_for_write(file);
  out << kAggregateHeader << '\n'
      << a.algo << ',' << a.env << ',' << format_real(a.mean) << ',' << format_real(a.std) << ','
      << join_seeds(a.seeds) << '\n';
  finish(out, file);
}

void write_grid(const std::filesystem::path& file, const std::vector<GridCell>& cells) {
  auto out = open_for_write(file);
  out << kGridHeader << '\n';
  for (const auto& c : cells)
    out << format_real(c.k_final) << ',' << format_real(c.learning_rate) << ','
        << format_real(c.mean) << ',' << format_real(c.std) << '\n';
  finish(out, file);
}

std::vector<EpisodeRow> read_episodes(const std::filesystem::path& file) {
  std::vector<EpisodeRow> rows;
  for (const auto& f : read_csv(file, kEpisodeHeader)) {
    expect_fields(f, 4, file);
    rows.push_back({parse_count(f[0]), parse_count(f[1]), parse_real(f[2]), parse_count(f[3])});
  }
  return rows;
}

std::vector<FrameRow> read_frames(const std::filesystem::path& file) {
  std::vector<FrameRow> rows;
  for (const auto& f : read_csv(file, kFrameHeader)) {
    expect_fields(f, 4, file);
    rows.push_back({parse_count(f[0]), parse_real(f[1]), parse_real(f[2]), parse_real(f[3])});
  }
  return rows;
}

SeedSummary read_seed_summary(const std::filesystem::path& file) {
  const auto rows = read_csv(file, kEvalHeader);
  if (rows.size() != 1) throw IoError(file.string() + ": expected exactly one row");
  const auto& f = rows.front();
  expect_fields(f, 6, file);
  return {static_cast<std::uint64_t>(std::stoull(f[0])), parse_real(f[1]), parse_real(f[2]),
          parse_count(f[3]), parse_real(f[4]), parse_real(f[5])};
}

Aggregate read_aggregate(const std::filesystem::path& file) {
  const auto rows = read_csv(file, kAggregateHeader);
  if (rows.size() != 1) throw IoError(file.string() + ": expected exactly one row");
  const auto& f = rows.front();
  expect_fields(f, 5, file);
  Aggregate a{f[0], f[1], parse_real(f[2]), parse_real(f[3]), {}};
  for (const auto& s : split(f[4], ';'))
    if (!s.empty()) a.seeds.push_back(std::stoull(s));
  return a;
}

std::vector<GridCell> read_grid(const std::filesystem::path& file) {
  std::vector<GridCell> cells;
  for (const auto& f : read_csv(file, kGridHeader)) {
    expect_fields(f, 4, file);
    cells.push_back({parse_real(f[0]), parse_real(f[1]), parse_real(f[2]), parse_real(f[3])});
  }
  return cells;
}

}  // namespace noisyq::harness
