// AArch64 Advanced SIMD variant, two doubles per vector.

#include <arm_neon.h>

#include <limits>

#include "kernels_internal.hpp"

namespace vppart::simd::neon {

namespace {

constexpr std::size_t kLanes = 2;

double min_sq_distance(const double* query, const double* cols, std::size_t stride, std::size_t n,
                       std::size_t dim) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t vec_end = n - n % kLanes;
  float64x2_t best_v = vdupq_n_f64(best);
  for (std::size_t i = 0; i < vec_end; i += kLanes) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t j = 0; j < dim; ++j) {
      const float64x2_t diff = vsubq_f64(vld1q_f64(cols + j * stride + i), vdupq_n_f64(query[j]));
      acc = vaddq_f64(acc, vmulq_f64(diff, diff));
    }
    best_v = vminq_f64(acc, best_v);
  }
  const double lane0 = vgetq_lane_f64(best_v, 0);
  const double lane1 = vgetq_lane_f64(best_v, 1);
  best = lane0 < best ? lane0 : best;
  best = lane1 < best ? lane1 : best;

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
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t len2 = vdupq_n_f64(dir_len2);
  for (std::size_t i = 0; i < vec_end; i += kLanes) {
    float64x2_t t = zero;
    if (dir_len2 > 0.0) {
      float64x2_t dot = zero;
      for (std::size_t j = 0; j < dim; ++j) {
        const float64x2_t rel = vsubq_f64(vld1q_f64(cols + j * stride + i), vdupq_n_f64(origin[j]));
        dot = vaddq_f64(dot, vmulq_f64(rel, vdupq_n_f64(dir[j])));
      }
      t = vdivq_f64(dot, len2);
      t = vmaxq_f64(t, zero);
      t = vminq_f64(t, one);
    }
    float64x2_t acc = zero;
    for (std::size_t j = 0; j < dim; ++j) {
      const float64x2_t rel = vsubq_f64(vld1q_f64(cols + j * stride + i), vdupq_n_f64(origin[j]));
      const float64x2_t diff = vsubq_f64(rel, vmulq_f64(t, vdupq_n_f64(dir[j])));
      acc = vaddq_f64(acc, vmulq_f64(diff, diff));
    }
    vst1q_f64(out + i, acc);
  }
  if (vec_end < n) {
    scalar::table.segment_sq_distances(cols + vec_end, stride, n - vec_end, dim, origin, dir, dir_len2,
                                       out + vec_end);
  }
}

}  // namespace

const KernelTable table{Level::Neon, &min_sq_distance, &segment_sq_distances};

}  // namespace vppart::simd::neon
