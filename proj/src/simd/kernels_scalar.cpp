#include <limits>

#include "vppart/simd/kernels.hpp"

namespace vppart::simd::scalar {

namespace {

double min_sq_distance(const double* query, const double* cols, std::size_t stride, std::size_t n,
                       std::size_t dim) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double diff = cols[j * stride + i] - query[j];
      acc = acc + diff * diff;
    }
    best = acc < best ? acc : best;
  }
  return best;
}

void segment_sq_distances(const double* cols, std::size_t stride, std::size_t n, std::size_t dim,
                          const double* origin, const double* dir, double dir_len2, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double t = 0.0;
    if (dir_len2 > 0.0) {
      double dot = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        dot = dot + (cols[j * stride + i] - origin[j]) * dir[j];
      }
      t = dot / dir_len2;
      t = t > 0.0 ? t : 0.0;
      t = t < 1.0 ? t : 1.0;
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double diff = (cols[j * stride + i] - origin[j]) - t * dir[j];
      acc = acc + diff * diff;
    }
    out[i] = acc;
  }
}

}  // namespace

const KernelTable table{Level::Scalar, &min_sq_distance, &segment_sq_distances};

}  // namespace vppart::simd::scalar
