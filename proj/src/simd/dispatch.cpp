#include <cstdlib>
#include <stdexcept>
#include <string>

#include "dwdm80/simd/kernels.hpp"

namespace dwdm80::simd {

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(DWDM80_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("ISA not available: " + std::string(isa_name(isa)));
  }
#if defined(DWDM80_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::avx2_kernels();
#endif
  return scalar_kernels();
}

namespace {

const KernelTable& select() noexcept {
  const char* env = std::getenv("DWDM80_ISA");
  if (env != nullptr && std::string(env) == "scalar") return scalar_kernels();
  if (isa_supported(Isa::avx2)) return kernels_for(Isa::avx2);
  return scalar_kernels();
}

}  // namespace

const KernelTable& kernels() noexcept {
  static const KernelTable& table = select();
  return table;
}

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace dwdm80::simd
