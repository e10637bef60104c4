#include "vppart/art.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "vppart/errors.hpp"

namespace vppart {

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::Rt: return "rt";
    case Algorithm::Fscs: return "fscs";
    case Algorithm::Vpp: return "vpp";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "rt") return Algorithm::Rt;
  if (name == "fscs") return Algorithm::Fscs;
  if (name == "vpp") return Algorithm::Vpp;
  throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected rt, fscs or vpp)");
}

void ArtConfig::validate() const {
  if (k < 1) throw ContractViolation("ArtConfig: k must be at least 1");
  tree.validate();
}

std::size_t argmax_first(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("argmax_first: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

TestGenerator::TestGenerator(ArtConfig config, RngSeed candidate_seed)
    : config_(std::move(config)), rng_(candidate_seed) {
  config_.validate();
}

Point TestGenerator::random_next() { return uniform_sample(config_.domain, rng_); }

Point TestGenerator::next() { return executed_count() == 0 ? random_next() : select_next(); }

template <typename MinDistance>
std::size_t TestGenerator::pick_farthest(MinDistance&& min_distance) {
  const std::size_t d = config_.domain.dim();
  const std::size_t k = config_.k;
  candidates_.resize(k * d);
  candidate_dists_.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    uniform_sample_into(config_.domain, rng_, std::span<double>(candidates_).subspan(c * d, d));
  }
  for (std::size_t c = 0; c < k; ++c) {
    candidate_dists_[c] = min_distance(std::span<const double>(candidates_).subspan(c * d, d));
  }
  return argmax_first(candidate_dists_);
}

namespace {

Point candidate_at(std::span<const double> candidates, std::size_t index, std::size_t dim) {
  const auto row = candidates.subspan(index * dim, dim);
  return Point(std::vector<double>(row.begin(), row.end()));
}

}  // namespace

RandomTester::RandomTester(ArtConfig config, RngSeed candidate_seed)
    : TestGenerator(std::move(config), candidate_seed) {}

FscsArt::FscsArt(ArtConfig config, RngSeed candidate_seed)
    : TestGenerator(std::move(config), candidate_seed), executed_(config_.domain.dim()) {}

Point FscsArt::select_next() {
  if (executed_.empty()) throw ContractViolation("FscsArt::select_next: no executed test cases yet");
  const std::size_t best = pick_farthest([&](std::span<const double> c) { return executed_.min_distance(c); });
  return candidate_at(candidates_, best, config_.domain.dim());
}

VppArt::VppArt(ArtConfig config, RngSeed candidate_seed, RngSeed vantage_seed)
    : TestGenerator(std::move(config), candidate_seed), tree_(config_.domain.dim(), config_.tree, vantage_seed) {}

Point VppArt::select_next() {
  if (tree_.empty()) throw ContractViolation("VppArt::select_next: tree is empty");
  const std::size_t best = pick_farthest([&](std::span<const double> c) { return tree_.nearest_distance(c); });
  return candidate_at(candidates_, best, config_.domain.dim());
}

std::unique_ptr<TestGenerator> make_generator(Algorithm algorithm, const ArtConfig& config,
                                              std::uint64_t trial_seed) {
  const RngSeed candidates{trial_seed, kCandidateStream};
  switch (algorithm) {
    case Algorithm::Rt: return std::make_unique<RandomTester>(config, candidates);
    case Algorithm::Fscs: return std::make_unique<FscsArt>(config, candidates);
    case Algorithm::Vpp: return std::make_unique<VppArt>(config, candidates, RngSeed{trial_seed, kVantageStream});
  }
  throw ContractViolation("make_generator: unknown algorithm");
}

std::uint64_t default_cap(double theta, double multiplier) {
  return static_cast<std::uint64_t>(std::ceil(multiplier * std::ceil(1.0 / theta)));
}

TrialResult run_until_failure(Algorithm algorithm, const FailureProfile& profile, const ArtConfig& config,
                              std::uint64_t trial_seed, std::uint64_t cap) {
  if (cap < 1) throw ContractViolation("run_until_failure: cap must be at least 1");
  if (profile.domain().dim() != config.domain.dim()) {
    throw ContractViolation("run_until_failure: profile and config dimensions differ");
  }
  TrialResult result;
  result.algorithm = algorithm;
  result.dim = config.domain.dim();
  result.theta = profile.theta();
  result.pattern = profile.pattern();
  result.seed = trial_seed;

  const auto start = std::chrono::steady_clock::now();
  auto generator = make_generator(algorithm, config, trial_seed);
  std::uint64_t executed = 0;
  bool failed = false;
  while (executed < cap) {
    const Point tc = generator->next();
    ++executed;
    if (profile.contains(tc.coords())) {
      failed = true;
      break;
    }
    generator->record(tc);
  }
  result.f_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.f_measure = executed;
  result.exhausted = !failed;
  return result;
}

}  // namespace vppart
