#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vppart/geometry.hpp"

namespace vppart {

// Growable column-major point storage feeding the simd distance kernels.
class PointBlock {
 public:
  explicit PointBlock(std::size_t dim, std::size_t initial_capacity = 0);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  void push_back(std::span<const double> coords);
  void clear() noexcept { size_ = 0; }

  double coord(std::size_t point, std::size_t axis) const noexcept {
    return data_[axis * capacity_ + point];
  }
  Point at(std::size_t i) const;

  // Minimum squared / plain Euclidean distance from query to any stored point;
  // +inf when empty.
  double min_sq_distance(std::span<const double> query) const;
  double min_distance(std::span<const double> query) const;

 private:
  void grow(std::size_t new_capacity);

  std::size_t dim_;
  std::size_t size_ = 0;
  std::size_t capacity_ = 0;
  std::vector<double> data_;
};

}  // namespace vppart
