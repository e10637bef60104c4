#include "vppart/rng.hpp"

#include <bit>
#include <cmath>

#include "vppart/errors.hpp"

namespace vppart {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stable_hash(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (std::uint64_t w : words) {
    h = splitmix64(h ^ splitmix64(w));
  }
  return h;
}

std::uint64_t double_bits(double v) noexcept {
  if (v == 0.0) v = 0.0;  // fold -0.0
  return std::bit_cast<std::uint64_t>(v);
}

RandomStream::RandomStream(RngSeed seed)
    : engine_(stable_hash({seed.seed, seed.stream, 0x5eedULL})) {}

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  const double v = lo + uniform01() * (hi - lo);
  return v < hi ? v : std::nextafter(hi, lo);
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  if (n == 0) throw ContractViolation("RandomStream::below: n must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

}  // namespace vppart
