#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace vppart {

// Identifies one independent random stream: a base seed plus a split index.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Order-sensitive, platform-stable mix of 64-bit words.
std::uint64_t stable_hash(std::initializer_list<std::uint64_t> words) noexcept;

// Bit pattern of a double, for hashing real-valued keys.
std::uint64_t double_bits(double v) noexcept;

// Seedable stream of uniform variates. The variate mapping is implemented
// here rather than with <random> distributions so sequences are identical
// across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(RngSeed seed);

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Uniform on [lo, hi); never returns hi.
  double uniform(double lo, double hi);
  // Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vppart
