#pragma once

// Data-parallel distance kernels over structure-of-arrays point blocks.
//
// A block of n points in d dimensions is stored column-major: coordinate j of
// point i lives at cols[j * stride + i]. Every variant evaluates each point's
// sum in ascending coordinate order without fused multiply-add, so all
// variants return bit-identical results; only the number of points processed
// per instruction differs.

#include <cstddef>
#include <string_view>

namespace vppart::simd {

enum class Level { Scalar, Avx2, Neon };

std::string_view level_name(Level level) noexcept;

struct KernelTable {
  Level level;

  // min over i < n of sum_j (cols[j*stride+i] - query[j])^2; +inf when n == 0.
  double (*min_sq_distance)(const double* query, const double* cols, std::size_t stride,
                            std::size_t n, std::size_t dim);

  // out[i] = squared distance from point i to the segment origin + t*dir,
  // t in [0, 1]. dir_len2 is sum_j dir[j]^2; a zero-length segment degrades
  // to the distance from origin.
  void (*segment_sq_distances)(const double* cols, std::size_t stride, std::size_t n,
                               std::size_t dim, const double* origin, const double* dir,
                               double dir_len2, double* out);
};

// Variant selected once per process: the widest one the CPU supports, unless
// the environment variable VPPART_SIMD=scalar forces the reference kernels.
const KernelTable& active();

// A specific variant, or nullptr when it is not compiled in or the CPU lacks it.
const KernelTable* table_for(Level level);

namespace scalar {
extern const KernelTable table;
}

}  // namespace vppart::simd
