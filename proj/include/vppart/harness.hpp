#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vppart/art.hpp"
#include "vppart/benchmark.hpp"
#include "vppart/failure_sim.hpp"

namespace vppart {

inline constexpr std::string_view kVersion = "0.1.0";

struct ExperimentConfig {
  std::vector<Algorithm> algorithms{Algorithm::Rt, Algorithm::Fscs, Algorithm::Vpp};
  std::vector<std::size_t> dims{1};
  std::vector<double> thetas{0.01};
  std::vector<Pattern> patterns{Pattern::Block};
  std::size_t reps = 500;
  std::uint64_t base_seed = 1;
  std::size_t k = 10;
  int epsilon = 3;
  int lambda = 10;
  double cap_multiplier = 10.0;
  std::size_t parallelism = 1;

  // Throws ConfigError on empty lists, duplicates, or out-of-range values.
  void validate() const;
  ArtConfig art_config(std::size_t dim) const;
  // Canonical JSON of everything that affects results (not parallelism).
  std::string canonical_json() const;
  // Hex digest of canonical_json().
  std::string hash() const;
};

// Values read from a JSON config file. Sections: "experiment" (algorithms,
// dims, thetas, patterns, reps, seed, cap_multiplier), "art" (k, epsilon,
// lambda), "run" (parallelism, out). Unknown keys are rejected.
struct ConfigFile {
  ExperimentConfig experiment;
  std::optional<std::string> out;
};
ConfigFile parse_config(std::string_view json_text, ExperimentConfig defaults = {});
ConfigFile load_config(const std::filesystem::path& path, ExperimentConfig defaults = {});

// Per-trial seed from the trial's position in the grid. The algorithm is not
// part of it, so every algorithm in a cell faces the same failure region and
// the same candidate stream (common random numbers).
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t dim, double theta, Pattern pattern, std::size_t rep);

struct CellKey {
  std::size_t dim = 0;
  double theta = 0.0;
  Pattern pattern = Pattern::Block;

  friend bool operator==(const CellKey&, const CellKey&) = default;
};

struct Comparison {
  Algorithm other = Algorithm::Rt;
  double p_value = 0.0;
  double effect_size = 0.0;  // A12(other's F-measures, this row's); > 0.5 favours this row
};

struct ScenarioSummary {
  Algorithm algorithm = Algorithm::Rt;
  CellKey cell;
  std::size_t reps = 0;       // trials run, exhausted included
  std::size_t exhausted = 0;  // trials that hit the cap; left out of every statistic
  double mean_f = 0.0;        // NaN when every trial was exhausted
  double f_ratio = 0.0;
  double mean_f_time = 0.0;
  std::vector<Comparison> versus;
  bool skipped = false;
  std::string skip_reason;
};

struct SkippedCell {
  CellKey cell;
  std::string reason;
};

struct ResultTable {
  std::vector<ScenarioSummary> rows;  // grid order: dim, theta, pattern, algorithm
  std::vector<TrialResult> trials;    // grid order, then rep, then algorithm
  std::vector<SkippedCell> skipped;
  std::string config_hash;
  std::string version{kVersion};
  double wall_seconds = 0.0;
  std::size_t cells_resumed = 0;
};

struct RunOptions {
  // Completed cells are stored here and reloaded on a later run with the same
  // config hash; empty disables resuming.
  std::optional<std::filesystem::path> cell_dir;
};

ResultTable run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

// Rows for one cell, one per algorithm in `order` that has trials.
std::vector<ScenarioSummary> summarize_cell(const CellKey& cell, std::span<const TrialResult> trials,
                                            std::span<const Algorithm> order);
// Groups trials by cell in order of first appearance.
std::vector<ScenarioSummary> summarize_trials(std::span<const TrialResult> trials);

struct ParamStudyRow {
  std::size_t dim = 0;
  Algorithm algorithm = Algorithm::Vpp;
  int epsilon = 0;  // 0 for the brute-force reference row
  int lambda = 0;
  std::size_t reps = 0;
  std::size_t exhausted = 0;
  double mean_f = 0.0;
  double f_ratio = 0.0;
};

// Block-pattern F-ratios of VPP-ART for every (epsilon, lambda) pair, plus an
// FSCS-ART reference row per dimension. Uses base.dims, the first of
// base.thetas, base.reps, base.base_seed, base.k and base.cap_multiplier.
std::vector<ParamStudyRow> run_param_study(const ExperimentConfig& base, std::span<const int> epsilons,
                                           std::span<const int> lambdas);

std::vector<TimingSeries> run_benchmark(std::span<const std::size_t> dims, std::span<const Algorithm> algorithms,
                                        const BenchmarkOptions& options);

// CSV renderings. Summary omits timing so equal configs give equal bytes.
std::string summary_csv(const ResultTable& table, std::span<const Algorithm> algorithms);
std::string summary_csv(std::span<const ScenarioSummary> rows, std::span<const Algorithm> algorithms);
std::string trials_csv(std::span<const TrialResult> trials);
std::vector<TrialResult> parse_trials_csv(std::string_view text);
std::string param_study_csv(std::span<const ParamStudyRow> rows);
std::string timings_csv(std::span<const TimingSeries> series);
std::string metadata_json(const ExperimentConfig& config, const ResultTable& table);

// Runs `fn(i)` for i in [0, n) on up to `workers` threads.
// The first exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace vppart
