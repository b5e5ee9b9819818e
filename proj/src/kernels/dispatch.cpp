#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rankbandit/kernels.hpp"

namespace rankbandit::simd {

#if defined(RANKBANDIT_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(RANKBANDIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* resolve_default() {
  const char* env = std::getenv("RANKBANDIT_ISA");
  if (env != nullptr && std::string(env) == "scalar") return &scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{resolve_default()};
  return table;
}

}  // namespace

const KernelTable* avx2_kernels() {
#if defined(RANKBANDIT_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& kernels() { return *active().load(std::memory_order_acquire); }

bool isa_available(Isa isa) {
  return isa == Isa::scalar || avx2_kernels() != nullptr;
}

void set_isa(Isa isa) {
  if (!isa_available(isa))
    throw std::invalid_argument("ISA not available on this CPU: " +
                                std::string(isa_name(isa)));
  active().store(isa == Isa::scalar ? &scalar_kernels() : avx2_kernels(),
                 std::memory_order_release);
}

Isa active_isa() { return kernels().isa; }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace rankbandit::simd
