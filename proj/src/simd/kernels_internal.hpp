#pragma once

#include "vppart/simd/kernels.hpp"

namespace vppart::simd {

#if defined(VPPART_HAVE_AVX2_TU)
namespace avx2 {
extern const KernelTable table;
}
#endif

#if defined(VPPART_HAVE_NEON_TU)
namespace neon {
extern const KernelTable table;
}
#endif

}  // namespace vppart::simd
