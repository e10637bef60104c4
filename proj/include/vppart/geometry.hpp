#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "vppart/rng.hpp"

namespace vppart {

// A test case: a coordinate vector in a d-dimensional numeric input domain.
// Every coordinate is finite.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

// Axis-aligned box [lower, upper) in every dimension.
class InputDomain {
 public:
  InputDomain(Point lower, Point upper);

  static InputDomain unit(std::size_t dim);

  std::size_t dim() const noexcept { return lower_.dim(); }
  const Point& lower() const noexcept { return lower_; }
  const Point& upper() const noexcept { return upper_; }
  double width(std::size_t i) const noexcept { return upper_[i] - lower_[i]; }
  bool contains(std::span<const double> p) const noexcept;

 private:
  Point lower_;
  Point upper_;
};

// Coordinates are accumulated in index order, so dist(a, b) == dist(b, a)
// bit for bit.
double euclidean_distance(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

inline double euclidean_distance(const Point& a, const Point& b) {
  return euclidean_distance(a.coords(), b.coords());
}

// Draws dim() variates from rng, one per coordinate in index order.
Point uniform_sample(const InputDomain& domain, RandomStream& rng);
void uniform_sample_into(const InputDomain& domain, RandomStream& rng, std::span<double> out);

}  // namespace vppart
