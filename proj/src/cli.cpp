#include "vppart/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vppart/csv.hpp"
#include "vppart/errors.hpp"
#include "vppart/harness.hpp"
#include "vppart/simd/kernels.hpp"

#if defined(__unix__) || defined(__APPLE__)
#include <stdlib.h>
#endif

namespace vppart {

namespace {

namespace fs = std::filesystem;

constexpr int kExitConfig = 1;
constexpr int kExitInfeasible = 2;

// Raw flag values; empty lists and unset optionals mean "keep the config value".
struct Flags {
  std::string config;
  std::string out;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> parallelism;
  std::optional<std::size_t> k;
  std::optional<double> cap_multiplier;
  std::vector<std::size_t> dims;
  std::vector<double> thetas;
  std::vector<std::string> patterns;
  std::vector<std::string> algorithms;
  std::vector<int> epsilons;
  std::vector<int> lambdas;
};

void add_grid_flags(CLI::App& cmd, Flags& f, bool lists_for_tree) {
  cmd.add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  cmd.add_option("--out", f.out, "output directory (default $ART_BENCH_OUT or ./results)");
  cmd.add_option("--reps", f.reps, "trials per cell and algorithm");
  cmd.add_option("--seed", f.seed, "base seed");
  cmd.add_option("--parallelism", f.parallelism, "worker threads");
  cmd.add_option("--k", f.k, "candidate set size");
  cmd.add_option("--cap-multiplier", f.cap_multiplier, "per-trial cap is this times ceil(1/theta)");
  cmd.add_option("--dims", f.dims, "comma-separated dimensions")->delimiter(',');
  cmd.add_option("--thetas", f.thetas, "comma-separated failure rates")->delimiter(',');
  if (lists_for_tree) {
    cmd.add_option("--epsilon", f.epsilons, "comma-separated epsilon values")->delimiter(',');
    cmd.add_option("--lambda", f.lambdas, "comma-separated lambda values")->delimiter(',');
  } else {
    cmd.add_option("--patterns", f.patterns, "comma-separated: block, strip, point")->delimiter(',');
    cmd.add_option("--algorithms", f.algorithms, "comma-separated: rt, fscs, vpp")->delimiter(',');
    cmd.add_option("--epsilon", f.epsilons, "children per promoted node")->expected(1);
    cmd.add_option("--lambda", f.lambdas, "leaf capacity")->expected(1);
  }
}

struct Resolved {
  ExperimentConfig config;
  fs::path out;
};

Resolved resolve(const Flags& f, ExperimentConfig defaults) {
  ConfigFile file{std::move(defaults), std::nullopt};
  if (!f.config.empty()) file = load_config(f.config, file.experiment);
  ExperimentConfig& c = file.experiment;
  if (f.reps) c.reps = *f.reps;
  if (f.seed) c.base_seed = *f.seed;
  if (f.parallelism) c.parallelism = *f.parallelism;
  if (f.k) c.k = *f.k;
  if (f.cap_multiplier) c.cap_multiplier = *f.cap_multiplier;
  if (!f.dims.empty()) c.dims = f.dims;
  if (!f.thetas.empty()) c.thetas = f.thetas;
  if (!f.patterns.empty()) {
    c.patterns.clear();
    for (const auto& p : f.patterns) c.patterns.push_back(parse_pattern(p));
  }
  if (!f.algorithms.empty()) {
    c.algorithms.clear();
    for (const auto& a : f.algorithms) c.algorithms.push_back(parse_algorithm(a));
  }
  if (f.epsilons.size() == 1) c.epsilon = f.epsilons.front();
  if (f.lambdas.size() == 1) c.lambda = f.lambdas.front();

  fs::path out;
  if (!f.out.empty()) {
    out = f.out;
  } else if (file.out) {
    out = *file.out;
  } else if (const char* env = std::getenv("ART_BENCH_OUT"); env != nullptr && *env != '\0') {
    out = env;
  } else {
    out = "results";
  }
  return {c, out};
}

int cmd_simulate(const Flags& f) {
  Resolved r = resolve(f, {});
  r.config.validate();
  fs::create_directories(r.out);
  const ResultTable table = run_experiment(r.config, RunOptions{r.out / "cells"});
  csv::write_file_atomic(r.out / "summary.csv", summary_csv(table, r.config.algorithms));
  csv::write_file_atomic(r.out / "trials.csv", trials_csv(table.trials));
  csv::write_file_atomic(r.out / "metadata.json", metadata_json(r.config, table));
  for (const auto& s : table.skipped) {
    std::cerr << "skipped d=" << s.cell.dim << " theta=" << csv::real(s.cell.theta)
              << " pattern=" << to_string(s.cell.pattern) << ": " << s.reason << "\n";
  }
  std::cout << "wrote " << (r.out / "summary.csv").string() << " (" << table.rows.size() << " rows, "
            << table.cells_resumed << " cells resumed)\n";
  const std::size_t cells = r.config.dims.size() * r.config.thetas.size() * r.config.patterns.size();
  return table.skipped.size() == cells ? kExitInfeasible : 0;
}

int cmd_paramstudy(const Flags& f) {
  ExperimentConfig defaults;
  defaults.thetas = {0.0005};
  Resolved r = resolve(f, defaults);
  const std::vector<int> eps = f.epsilons.empty() ? std::vector<int>{r.config.epsilon} : f.epsilons;
  const std::vector<int> lams = f.lambdas.empty() ? std::vector<int>{r.config.lambda} : f.lambdas;
  if (!f.epsilons.empty()) r.config.epsilon = *std::max_element(eps.begin(), eps.end());
  if (!f.lambdas.empty()) r.config.lambda = *std::max_element(lams.begin(), lams.end());
  if (r.config.thetas.size() != 1) throw ConfigError("paramstudy takes a single theta");
  const auto rows = run_param_study(r.config, eps, lams);
  fs::create_directories(r.out);
  csv::write_file_atomic(r.out / "paramstudy.csv", param_study_csv(rows));
  std::cout << "wrote " << (r.out / "paramstudy.csv").string() << " (" << rows.size() << " rows)\n";
  return 0;
}

struct BenchFlags {
  std::size_t n_total = 20'000;
  std::size_t interval = 500;
  std::size_t repetitions = 3;
};

int cmd_benchmark(const Flags& f, const BenchFlags& b) {
  ExperimentConfig defaults;
  defaults.algorithms = {Algorithm::Fscs, Algorithm::Vpp};
  defaults.dims = {1, 2, 3, 10};
  Resolved r = resolve(f, defaults);
  r.config.validate();

  double load = 0.0;
#if defined(__unix__) || defined(__APPLE__)
  if (getloadavg(&load, 1) == 1 && load >= 1.0) {
    std::cerr << "warning: 1-minute load average is " << load << "; timings may be noisy\n";
  }
#endif

  BenchmarkOptions opts;
  opts.n_total = b.n_total;
  opts.interval = b.interval;
  opts.repetitions = b.repetitions;
  opts.art = r.config.art_config(1);
  opts.seed = r.config.base_seed;
  if (opts.interval < 1 || opts.n_total < opts.interval || opts.repetitions < 1) {
    throw ConfigError("benchmark needs 1 <= interval <= n-total and repetitions >= 1");
  }
  const auto series = run_benchmark(r.config.dims, r.config.algorithms, opts);
  fs::create_directories(r.out);
  csv::write_file_atomic(r.out / "timings.csv", timings_csv(series));
  for (const auto& s : series) {
    std::cout << to_string(s.algorithm) << " d=" << s.dim << " n=" << s.checkpoints.back().n_generated
              << " seconds=" << csv::real(s.checkpoints.back().cumulative_seconds) << "\n";
  }
  std::cout << "simd: " << simd::level_name(simd::active().level) << "\n";
  return 0;
}

int cmd_stats(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<TrialResult> trials;
  for (const auto& path : inputs) {
    auto part = parse_trials_csv(csv::read_file(path));
    trials.insert(trials.end(), part.begin(), part.end());
  }
  std::vector<Algorithm> order;
  for (const auto& t : trials) {
    if (std::find(order.begin(), order.end(), t.algorithm) == order.end()) order.push_back(t.algorithm);
  }
  const auto rows = summarize_trials(trials);
  const std::string text = summary_csv(rows, order);
  if (out.empty()) {
    std::cout << text;
  } else {
    csv::write_file_atomic(out, text);
  }
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Adaptive random testing simulator with a vantage-point tree index"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Flags sim_flags, study_flags, bench_flags;
  BenchFlags bench;
  std::vector<std::string> stats_inputs;
  std::string stats_out;

  auto* simulate = app.add_subcommand("simulate", "run the failure-detection experiment grid");
  add_grid_flags(*simulate, sim_flags, false);

  auto* paramstudy = app.add_subcommand("paramstudy", "VPP-ART F-ratios over (epsilon, lambda) pairs");
  add_grid_flags(*paramstudy, study_flags, true);

  auto* benchmark = app.add_subcommand("benchmark", "cumulative test generation time");
  add_grid_flags(*benchmark, bench_flags, false);
  benchmark->add_option("--n-total", bench.n_total, "tests generated per run");
  benchmark->add_option("--interval", bench.interval, "checkpoint spacing");
  benchmark->add_option("--repetitions", bench.repetitions, "timed runs per series (median reported)");

  auto* stats = app.add_subcommand("stats", "recompute summary statistics from raw trial CSVs");
  stats->add_option("trials", stats_inputs, "trials.csv files")->required()->check(CLI::ExistingFile);
  stats->add_option("--out", stats_out, "write the summary here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_flags);
    if (paramstudy->parsed()) return cmd_paramstudy(study_flags);
    if (benchmark->parsed()) return cmd_benchmark(bench_flags, bench);
    if (stats->parsed()) return cmd_stats(stats_inputs, stats_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace vppart
