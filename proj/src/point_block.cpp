#include "vppart/point_block.hpp"

#include <algorithm>
#include <cmath>

#include "vppart/errors.hpp"
#include "vppart/simd/kernels.hpp"

namespace vppart {

PointBlock::PointBlock(std::size_t dim, std::size_t initial_capacity) : dim_(dim) {
  if (dim == 0) throw ContractViolation("PointBlock: dimension must be at least 1");
  if (initial_capacity > 0) grow(initial_capacity);
}

void PointBlock::grow(std::size_t new_capacity) {
  std::vector<double> next(dim_ * new_capacity);
  for (std::size_t j = 0; j < dim_; ++j) {
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(j * capacity_), size_,
                next.begin() + static_cast<std::ptrdiff_t>(j * new_capacity));
  }
  data_ = std::move(next);
  capacity_ = new_capacity;
}

void PointBlock::push_back(std::span<const double> coords) {
  if (coords.size() != dim_) throw ContractViolation("PointBlock: dimension mismatch");
  if (size_ == capacity_) grow(std::max<std::size_t>(8, capacity_ * 2));
  for (std::size_t j = 0; j < dim_; ++j) data_[j * capacity_ + size_] = coords[j];
  ++size_;
}

Point PointBlock::at(std::size_t i) const {
  if (i >= size_) throw ContractViolation("PointBlock: index out of range");
  std::vector<double> coords(dim_);
  for (std::size_t j = 0; j < dim_; ++j) coords[j] = coord(i, j);
  return Point(std::move(coords));
}

double PointBlock::min_sq_distance(std::span<const double> query) const {
  if (query.size() != dim_) throw ContractViolation("PointBlock: query dimension mismatch");
  return simd::active().min_sq_distance(query.data(), data_.data(), capacity_, size_, dim_);
}

double PointBlock::min_distance(std::span<const double> query) const {
  return std::sqrt(min_sq_distance(query));
}

}  // namespace vppart
