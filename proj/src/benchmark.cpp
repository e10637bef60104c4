#include "vppart/benchmark.hpp"

#include <algorithm>
#include <chrono>

#include "vppart/errors.hpp"

namespace vppart {

namespace {

std::vector<double> timed_run(Algorithm algorithm, const ArtConfig& config, std::uint64_t seed, std::size_t steps,
                              std::size_t interval) {
  auto generator = make_generator(algorithm, config, seed);
  std::vector<double> marks;
  marks.reserve(interval == 0 ? 0 : steps / interval);
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 1; i <= steps; ++i) {
    generator->record(generator->next());
    if (interval != 0 && i % interval == 0) {
      marks.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
  }
  return marks;
}

}  // namespace

TimingSeries benchmark_generation(Algorithm algorithm, std::size_t dim, const BenchmarkOptions& options) {
  if (dim < 1) throw ContractViolation("benchmark_generation: dim must be at least 1");
  if (options.interval < 1 || options.n_total < options.interval) {
    throw ContractViolation("benchmark_generation: need 1 <= interval <= n_total");
  }
  if (options.repetitions < 1) throw ContractViolation("benchmark_generation: repetitions must be at least 1");

  ArtConfig config = options.art;
  config.domain = InputDomain::unit(dim);
  const std::uint64_t seed = stable_hash({options.seed, dim});

  timed_run(algorithm, config, seed, std::min(options.n_total, options.warmup_steps), 0);

  std::vector<std::vector<double>> runs;
  for (std::size_t r = 0; r < options.repetitions; ++r) {
    runs.push_back(timed_run(algorithm, config, seed, options.n_total, options.interval));
  }

  TimingSeries series{algorithm, dim, {}};
  const std::size_t count = options.n_total / options.interval;
  std::vector<double> column(options.repetitions);
  for (std::size_t c = 0; c < count; ++c) {
    for (std::size_t r = 0; r < options.repetitions; ++r) column[r] = runs[r][c];
    auto mid = column.begin() + static_cast<std::ptrdiff_t>(column.size() / 2);
    std::nth_element(column.begin(), mid, column.end());
    // Pointwise median of nondecreasing runs is itself nondecreasing.
    series.checkpoints.push_back({(c + 1) * options.interval, *mid});
  }
  return series;
}

}  // namespace vppart
