#pragma once

// Simulated faulty programs: a failure region of known measure placed at
// random in the input domain. A test fails iff it lands inside the region.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vppart/geometry.hpp"
#include "vppart/rng.hpp"

namespace vppart {

enum class Pattern { Block, Strip, Point };

std::string_view to_string(Pattern p) noexcept;
Pattern parse_pattern(std::string_view name);

// Half-open box [lower, lower + edge) in domain units.
struct Box {
  std::vector<double> lower;
  std::vector<double> edge;

  bool contains(std::span<const double> p) const noexcept;
  bool overlaps(const Box& other) const noexcept;
};

struct BlockRegion {
  Box box;
};

// Capsule around a segment joining two adjacent faces of the domain,
// clipped to the domain. Stored in unit-normalized coordinates, where each
// domain axis is rescaled to [0, 1).
struct StripRegion {
  std::vector<double> start;
  std::vector<double> end;
  double half_width = 0.0;
};

struct PointRegions {
  std::vector<Box> boxes;
};

using FailureGeometry = std::variant<BlockRegion, StripRegion, PointRegions>;

inline constexpr std::size_t kPointRegionCount = 25;
inline constexpr std::size_t kStripCalibrationSamples = 1'000'000;

// Cube with per-axis edge theta^(1/d) * width, uniformly placed fully inside.
BlockRegion place_block(double theta, const InputDomain& domain, RandomStream& rng);

// Picks two distinct axes a, b and sides, puts one endpoint uniformly on face
// x_a = side_a and the other on face x_b = side_b, then sets the width so the
// Monte-Carlo measure over mc_samples uniform points equals theta. Needs d >= 2.
StripRegion place_strip(double theta, const InputDomain& domain, RandomStream& rng,
                        std::size_t mc_samples = kStripCalibrationSamples);

// kPointRegionCount pairwise-disjoint cubes of measure theta / count each.
PointRegions place_point_pattern(double theta, const InputDomain& domain, RandomStream& rng);

class FailureProfile {
 public:
  FailureProfile(InputDomain domain, double theta, Pattern pattern, FailureGeometry geometry);

  const InputDomain& domain() const noexcept { return domain_; }
  double theta() const noexcept { return theta_; }
  Pattern pattern() const noexcept { return pattern_; }
  const FailureGeometry& geometry() const noexcept { return geometry_; }

  bool contains(std::span<const double> p) const;

  // One-line structured text: pattern tag then its parameters, six decimals.
  std::string describe() const;

 private:
  InputDomain domain_;
  double theta_;
  Pattern pattern_;
  FailureGeometry geometry_;
};

// Places a region for pattern. A strip in one dimension is placed as a block.
FailureProfile make_profile(Pattern pattern, double theta, const InputDomain& domain, RandomStream& rng);

// Squared distance from a unit-normalized point to the strip's segment.
double strip_sq_distance(const StripRegion& strip, std::span<const double> unit_point);

// Fraction of `samples` uniform unit-cube points within half_width of the segment.
double strip_measure(const StripRegion& strip, std::size_t dim, RandomStream& rng, std::size_t samples);

}  // namespace vppart
