#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vppart/art.hpp"

namespace vppart {

struct TimingCheckpoint {
  std::size_t n_generated = 0;
  double cumulative_seconds = 0.0;
};

struct TimingSeries {
  Algorithm algorithm = Algorithm::Fscs;
  std::size_t dim = 0;
  std::vector<TimingCheckpoint> checkpoints;
};

struct BenchmarkOptions {
  std::size_t n_total = 20'000;
  std::size_t interval = 500;
  std::size_t repetitions = 3;     // each checkpoint reports the median over these
  std::size_t warmup_steps = 2'000;  // discarded run of min(n_total, warmup_steps)
  ArtConfig art{};                 // domain is replaced by the unit cube of the requested dim
  std::uint64_t seed = 1;
};

// Pure generation (no failure checks): every generated test is recorded as
// executed. Checkpoints at interval, 2*interval, ..., n_total; single-threaded.
TimingSeries benchmark_generation(Algorithm algorithm, std::size_t dim, const BenchmarkOptions& options);

}  // namespace vppart
