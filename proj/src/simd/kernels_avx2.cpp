// Built with -mavx2; only reached through the dispatcher after a CPU check.

#include <immintrin.h>

#include <limits>

#include "kernels_internal.hpp"

namespace vppart::simd::avx2 {

namespace {

constexpr std::size_t kLanes = 4;

double min_sq_distance(const double* query, const double* cols, std::size_t stride, std::size_t n,
                       std::size_t dim) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t vec_end = n - n % kLanes;
  __m256d best_v = _mm256_set1_pd(best);
  for (std::size_t i = 0; i < vec_end; i += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < dim; ++j) {
      const __m256d x = _mm256_loadu_pd(cols + j * stride + i);
      const __m256d diff = _mm256_sub_pd(x, _mm256_set1_pd(query[j]));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    best_v = _mm256_min_pd(acc, best_v);
  }
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, best_v);
  for (double v : lanes) best = v < best ? v : best;

  for (std::size_t i = vec_end; i < n; ++i) {
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
  const std::size_t vec_end = n - n % kLanes;
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d len2 = _mm256_set1_pd(dir_len2);
  for (std::size_t i = 0; i < vec_end; i += kLanes) {
    __m256d t = zero;
    if (dir_len2 > 0.0) {
      __m256d dot = zero;
      for (std::size_t j = 0; j < dim; ++j) {
        const __m256d rel = _mm256_sub_pd(_mm256_loadu_pd(cols + j * stride + i), _mm256_set1_pd(origin[j]));
        dot = _mm256_add_pd(dot, _mm256_mul_pd(rel, _mm256_set1_pd(dir[j])));
      }
      t = _mm256_div_pd(dot, len2);
      t = _mm256_max_pd(t, zero);
      t = _mm256_min_pd(t, one);
    }
    __m256d acc = zero;
    for (std::size_t j = 0; j < dim; ++j) {
      const __m256d rel = _mm256_sub_pd(_mm256_loadu_pd(cols + j * stride + i), _mm256_set1_pd(origin[j]));
      const __m256d diff = _mm256_sub_pd(rel, _mm256_mul_pd(t, _mm256_set1_pd(dir[j])));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  if (vec_end < n) {
    scalar::table.segment_sq_distances(cols + vec_end, stride, n - vec_end, dim, origin, dir, dir_len2,
                                       out + vec_end);
  }
}

}  // namespace

const KernelTable table{Level::Avx2, &min_sq_distance, &segment_sq_distances};

}  // namespace vppart::simd::avx2
