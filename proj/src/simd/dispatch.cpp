#include <cstdlib>
#include <cstring>

#include "kernels_internal.hpp"

namespace vppart::simd {

std::string_view level_name(Level level) noexcept {
  switch (level) {
    case Level::Scalar: return "scalar";
    case Level::Avx2: return "avx2";
    case Level::Neon: return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Level level) {
  switch (level) {
    case Level::Scalar:
      return &scalar::table;
    case Level::Avx2:
#if defined(VPPART_HAVE_AVX2_TU)
      if (__builtin_cpu_supports("avx2")) return &avx2::table;
#endif
      return nullptr;
    case Level::Neon:
#if defined(VPPART_HAVE_NEON_TU)
      return &neon::table;  // mandatory on AArch64
#else
      return nullptr;
#endif
  }
  return nullptr;
}

namespace {

const KernelTable& select() {
  const char* forced = std::getenv("VPPART_SIMD");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return scalar::table;
  for (Level level : {Level::Avx2, Level::Neon}) {
    if (const KernelTable* t = table_for(level)) return *t;
  }
  return scalar::table;
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

}  // namespace vppart::simd
