#include "vppart/failure_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "vppart/errors.hpp"
#include "vppart/simd/kernels.hpp"

namespace vppart {

namespace {

constexpr std::size_t kMaxPlacementAttempts = 10'000;
constexpr std::size_t kChunk = 4096;
constexpr double kCalibrationTolerance = 0.02;

void require_theta(double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw InfeasibleRegion("failure rate must lie in (0, 1], got " + std::to_string(theta));
  }
}

Box random_box(const std::vector<double>& edge, const InputDomain& domain, RandomStream& rng) {
  Box box{std::vector<double>(edge.size()), edge};
  for (std::size_t i = 0; i < edge.size(); ++i) {
    const double lo = domain.lower()[i];
    box.lower[i] = rng.uniform(lo, std::max(lo, domain.upper()[i] - edge[i]));
  }
  return box;
}

std::vector<double> cube_edges(double fraction, const InputDomain& domain) {
  const double scale = std::pow(fraction, 1.0 / static_cast<double>(domain.dim()));
  std::vector<double> edge(domain.dim());
  for (std::size_t i = 0; i < edge.size(); ++i) edge[i] = scale * domain.width(i);
  return edge;
}

struct Segment {
  std::vector<double> dir;
  double len2 = 0.0;
};

Segment segment_of(const StripRegion& strip) {
  Segment s{std::vector<double>(strip.start.size()), 0.0};
  for (std::size_t j = 0; j < s.dir.size(); ++j) {
    s.dir[j] = strip.end[j] - strip.start[j];
    s.len2 = s.len2 + s.dir[j] * s.dir[j];
  }
  return s;
}

// Fills `out` with squared segment distances of `count` fresh uniform
// unit-cube points, generated point by point in chunks.
void sample_segment_distances(const StripRegion& strip, const Segment& seg, std::size_t dim, RandomStream& rng,
                              std::size_t count, std::vector<double>& out) {
  out.resize(count);
  std::vector<double> cols(dim * kChunk);
  const auto& kernels = simd::active();
  for (std::size_t done = 0; done < count; done += kChunk) {
    const std::size_t n = std::min(kChunk, count - done);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < dim; ++j) cols[j * kChunk + i] = rng.uniform01();
    }
    kernels.segment_sq_distances(cols.data(), kChunk, n, dim, strip.start.data(), seg.dir.data(), seg.len2,
                                 out.data() + done);
  }
}

void append_real(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  out += buf;
}

void append_vec(std::string& out, std::span<const double> v) {
  out += '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    append_real(out, v[i]);
  }
  out += ')';
}

void append_box(std::string& out, const Box& b) {
  out += "lower=";
  append_vec(out, b.lower);
  out += " edge=";
  append_vec(out, b.edge);
}

}  // namespace

std::string_view to_string(Pattern p) noexcept {
  switch (p) {
    case Pattern::Block: return "block";
    case Pattern::Strip: return "strip";
    case Pattern::Point: return "point";
  }
  return "unknown";
}

Pattern parse_pattern(std::string_view name) {
  if (name == "block") return Pattern::Block;
  if (name == "strip") return Pattern::Strip;
  if (name == "point") return Pattern::Point;
  throw ConfigError("unknown pattern '" + std::string(name) + "' (expected block, strip or point)");
}

bool Box::contains(std::span<const double> p) const noexcept {
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(p[i] >= lower[i] && p[i] < lower[i] + edge[i])) return false;
  }
  return true;
}

bool Box::overlaps(const Box& other) const noexcept {
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < other.lower[i] + other.edge[i] && other.lower[i] < lower[i] + edge[i])) return false;
  }
  return true;
}

BlockRegion place_block(double theta, const InputDomain& domain, RandomStream& rng) {
  require_theta(theta);
  return BlockRegion{random_box(cube_edges(theta, domain), domain, rng)};
}

PointRegions place_point_pattern(double theta, const InputDomain& domain, RandomStream& rng) {
  require_theta(theta);
  const std::vector<double> edge = cube_edges(theta / static_cast<double>(kPointRegionCount), domain);
  PointRegions regions;
  regions.boxes.reserve(kPointRegionCount);
  while (regions.boxes.size() < kPointRegionCount) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
      Box candidate = random_box(edge, domain, rng);
      const bool clear = std::none_of(regions.boxes.begin(), regions.boxes.end(),
                                      [&](const Box& b) { return b.overlaps(candidate); });
      if (clear) {
        regions.boxes.push_back(std::move(candidate));
        placed = true;
      }
    }
    if (!placed) {
      throw InfeasibleRegion("could not place " + std::to_string(kPointRegionCount) +
                             " disjoint point regions for theta " + std::to_string(theta));
    }
  }
  return regions;
}

double strip_sq_distance(const StripRegion& strip, std::span<const double> unit_point) {
  const Segment seg = segment_of(strip);
  double out = 0.0;
  simd::scalar::table.segment_sq_distances(unit_point.data(), 1, 1, unit_point.size(), strip.start.data(),
                                           seg.dir.data(), seg.len2, &out);
  return out;
}

StripRegion place_strip(double theta, const InputDomain& domain, RandomStream& rng, std::size_t mc_samples) {
  require_theta(theta);
  const std::size_t d = domain.dim();
  if (d < 2) throw InfeasibleRegion("strip pattern needs at least two dimensions");

  const std::size_t axis_a = rng.below(d);
  std::size_t axis_b = rng.below(d - 1);
  if (axis_b >= axis_a) ++axis_b;
  const double side_a = static_cast<double>(rng.below(2));
  const double side_b = static_cast<double>(rng.below(2));

  StripRegion strip{std::vector<double>(d), std::vector<double>(d), 0.0};
  for (std::size_t j = 0; j < d; ++j) strip.start[j] = rng.uniform01();
  for (std::size_t j = 0; j < d; ++j) strip.end[j] = rng.uniform01();
  strip.start[axis_a] = side_a;
  strip.end[axis_b] = side_b;

  // The measure is nondecreasing in the width, so the theta-quantile of the
  // sampled distances is the width at which the estimate first reaches theta.
  const auto wanted = static_cast<std::size_t>(std::ceil(theta * static_cast<double>(mc_samples)));
  if (wanted < 1 || wanted > mc_samples) {
    throw InfeasibleRegion("strip calibration needs more than " + std::to_string(mc_samples) + " samples");
  }
  const Segment seg = segment_of(strip);
  std::vector<double> dists;
  sample_segment_distances(strip, seg, d, rng, mc_samples, dists);
  std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(wanted - 1), dists.end());
  const double radius2 = dists[wanted - 1];
  strip.half_width = std::sqrt(radius2);

  const double limit = strip.half_width * strip.half_width;
  const auto hits = static_cast<std::size_t>(
      std::count_if(dists.begin(), dists.end(), [&](double v) { return v <= limit; }));
  const double measured = static_cast<double>(hits) / static_cast<double>(mc_samples);
  if (std::abs(measured - theta) > kCalibrationTolerance * theta) {
    throw InfeasibleRegion("strip calibration missed theta " + std::to_string(theta) + " (estimate " +
                           std::to_string(measured) + ")");
  }
  return strip;
}

double strip_measure(const StripRegion& strip, std::size_t dim, RandomStream& rng, std::size_t samples) {
  if (samples == 0) return 0.0;
  const Segment seg = segment_of(strip);
  std::vector<double> dists;
  sample_segment_distances(strip, seg, dim, rng, samples, dists);
  const double limit = strip.half_width * strip.half_width;
  const auto hits = std::count_if(dists.begin(), dists.end(), [&](double v) { return v <= limit; });
  return static_cast<double>(hits) / static_cast<double>(samples);
}

FailureProfile::FailureProfile(InputDomain domain, double theta, Pattern pattern, FailureGeometry geometry)
    : domain_(std::move(domain)), theta_(theta), pattern_(pattern), geometry_(std::move(geometry)) {
  require_theta(theta_);
}

bool FailureProfile::contains(std::span<const double> p) const {
  if (p.size() != domain_.dim()) throw ContractViolation("FailureProfile::contains: dimension mismatch");
  if (const auto* block = std::get_if<BlockRegion>(&geometry_)) return block->box.contains(p);
  if (const auto* points = std::get_if<PointRegions>(&geometry_)) {
    return std::any_of(points->boxes.begin(), points->boxes.end(), [&](const Box& b) { return b.contains(p); });
  }
  const auto& strip = std::get<StripRegion>(geometry_);
  std::vector<double> unit(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) unit[i] = (p[i] - domain_.lower()[i]) / domain_.width(i);
  return strip_sq_distance(strip, unit) <= strip.half_width * strip.half_width;
}

std::string FailureProfile::describe() const {
  std::string out;
  if (const auto* block = std::get_if<BlockRegion>(&geometry_)) {
    out = "block ";
    append_box(out, block->box);
  } else if (const auto* points = std::get_if<PointRegions>(&geometry_)) {
    out = "point boxes=[";
    for (std::size_t i = 0; i < points->boxes.size(); ++i) {
      if (i > 0) out += ';';
      append_box(out, points->boxes[i]);
    }
    out += ']';
  } else {
    const auto& strip = std::get<StripRegion>(geometry_);
    out = "strip start=";
    append_vec(out, strip.start);
    out += " end=";
    append_vec(out, strip.end);
    out += " half_width=";
    append_real(out, strip.half_width);
  }
  out += " theta=";
  append_real(out, theta_);
  return out;
}

FailureProfile make_profile(Pattern pattern, double theta, const InputDomain& domain, RandomStream& rng) {
  switch (pattern) {
    case Pattern::Block:
      return FailureProfile(domain, theta, pattern, place_block(theta, domain, rng));
    case Pattern::Strip:
      if (domain.dim() == 1) return FailureProfile(domain, theta, pattern, place_block(theta, domain, rng));
      return FailureProfile(domain, theta, pattern, place_strip(theta, domain, rng));
    case Pattern::Point:
      return FailureProfile(domain, theta, pattern, place_point_pattern(theta, domain, rng));
  }
  throw ContractViolation("make_profile: unknown pattern");
}

}  // namespace vppart
