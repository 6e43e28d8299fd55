#include <atomic>
#include <cstdlib>
#include <string_view>

#include "sharpstep/kernels.hpp"

namespace sharpstep::kernels {

#if defined(SHARPSTEP_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif

namespace {

bool CpuHasAvx2() {
#if defined(SHARPSTEP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* DefaultTable() {
  const char* env = std::getenv("SHARPSTEP_KERNELS");
  if (env != nullptr && std::string_view(env) == "scalar") return &scalar_table();
  if (const KernelTable* simd = avx2_table()) return simd;
  return &scalar_table();
}

std::atomic<const KernelTable*>& Active() {
  static std::atomic<const KernelTable*> table{DefaultTable()};
  return table;
}

}  // namespace

const KernelTable* avx2_table() {
#if defined(SHARPSTEP_HAVE_AVX2)
  static const bool supported = CpuHasAvx2();
  return supported ? &avx2_kernels() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *Active().load(std::memory_order_relaxed); }

bool select(std::string_view name) {
  if (name == "scalar") {
    Active().store(&scalar_table());
    return true;
  }
  if (name == "avx2") {
    if (const KernelTable* simd = avx2_table()) {
      Active().store(simd);
      return true;
    }
  }
  return false;
}

}  // namespace sharpstep::kernels
