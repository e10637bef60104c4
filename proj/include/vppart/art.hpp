#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "vppart/failure_sim.hpp"
#include "vppart/geometry.hpp"
#include "vppart/point_block.hpp"
#include "vppart/rng.hpp"
#include "vppart/vptree.hpp"

namespace vppart {

enum class Algorithm { Rt, Fscs, Vpp };

std::string_view to_string(Algorithm a) noexcept;
// Accepts "rt", "fscs", "vpp"; throws ConfigError otherwise.
Algorithm parse_algorithm(std::string_view name);

struct ArtConfig {
  std::size_t k = 10;  // candidate set size
  TreeParams tree{};
  InputDomain domain = InputDomain::unit(1);

  void validate() const;
};

// Split indices of a trial seed. Every algorithm reads its candidates from the
// same stream, so runs with equal seeds draw identical candidate sets until
// their selections diverge.
inline constexpr std::uint64_t kProfileStream = 0;
inline constexpr std::uint64_t kCandidateStream = 1;
inline constexpr std::uint64_t kVantageStream = 2;

// Index of the largest value; the lowest index wins ties. Requires a nonempty span.
std::size_t argmax_first(std::span<const double> values);

// Produces test cases one at a time. The caller executes each returned test
// and calls record() for the ones that did not fail.
class TestGenerator {
 public:
  virtual ~TestGenerator() = default;

  // The first test case is a plain uniform draw; later ones use select_next().
  Point next();
  // Uniform draw from the domain (random testing step).
  Point random_next();
  // Algorithm-specific choice; requires at least one executed test.
  virtual Point select_next() = 0;

  virtual void record(std::span<const double> executed) = 0;
  void record(const Point& executed) { record(executed.coords()); }
  virtual std::size_t executed_count() const = 0;

  const ArtConfig& config() const noexcept { return config_; }

 protected:
  TestGenerator(ArtConfig config, RngSeed candidate_seed);

  // Draws all k candidates up front (k*d variates), then returns the index of
  // the one whose nearest-executed distance is largest; first index wins ties.
  template <typename MinDistance>
  std::size_t pick_farthest(MinDistance&& min_distance);

  ArtConfig config_;
  RandomStream rng_;
  std::vector<double> candidates_;  // k rows of d coordinates
  std::vector<double> candidate_dists_;
};

class RandomTester final : public TestGenerator {
 public:
  RandomTester(ArtConfig config, RngSeed candidate_seed);

  Point select_next() override { return random_next(); }
  using TestGenerator::record;
  void record(std::span<const double>) override { ++executed_; }
  std::size_t executed_count() const override { return executed_; }

 private:
  std::size_t executed_ = 0;
};

// Fixed-size-candidate-set ART with exact brute-force nearest distances.
class FscsArt final : public TestGenerator {
 public:
  FscsArt(ArtConfig config, RngSeed candidate_seed);

  Point select_next() override;
  using TestGenerator::record;
  void record(std::span<const double> executed) override { executed_.push_back(executed); }
  std::size_t executed_count() const override { return executed_.size(); }

  const PointBlock& executed() const noexcept { return executed_; }
  // Candidates and their exact nearest distances from the last select_next().
  std::span<const double> last_candidates() const noexcept { return candidates_; }
  std::span<const double> last_candidate_distances() const noexcept { return candidate_dists_; }

 private:
  PointBlock executed_;
};

// FSCS-ART over a vantage-point tree with approximate nearest distances.
class VppArt final : public TestGenerator {
 public:
  VppArt(ArtConfig config, RngSeed candidate_seed, RngSeed vantage_seed);

  Point select_next() override;
  using TestGenerator::record;
  void record(std::span<const double> executed) override { tree_.insert(executed); }
  std::size_t executed_count() const override { return tree_.size(); }

  const VpTree& tree() const noexcept { return tree_; }
  std::span<const double> last_candidates() const noexcept { return candidates_; }
  std::span<const double> last_candidate_distances() const noexcept { return candidate_dists_; }

 private:
  VpTree tree_;
};

// Generator for `algorithm` with its streams split from trial_seed.
std::unique_ptr<TestGenerator> make_generator(Algorithm algorithm, const ArtConfig& config,
                                              std::uint64_t trial_seed);

struct TrialResult {
  Algorithm algorithm = Algorithm::Rt;
  std::size_t dim = 0;
  double theta = 0.0;
  Pattern pattern = Pattern::Block;
  std::uint64_t f_measure = 0;  // tests executed up to and including the first failure
  double f_time = 0.0;          // wall-clock seconds
  bool exhausted = false;       // cap reached without a failure
  std::uint64_t seed = 0;
  std::size_t rep = 0;
};

// Default per-trial cap: multiplier * ceil(1 / theta).
std::uint64_t default_cap(double theta, double multiplier = 10.0);

// Generates and checks tests until one lands in the failure region or `cap`
// tests have run.
TrialResult run_until_failure(Algorithm algorithm, const FailureProfile& profile, const ArtConfig& config,
                              std::uint64_t trial_seed, std::uint64_t cap);

}  // namespace vppart
