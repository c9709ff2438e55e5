#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Data-parallel inner loops shared by the signal and channel code.
//
// Every kernel has a scalar reference implementation. On x86-64 an AVX2/FMA
// variant is compiled into a separate translation unit and picked at runtime
// when the CPU reports support. Setting DWDM80_ISA=scalar in the environment
// forces the reference path.

namespace dwdm80::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  // sum_k |x_k|^2
  double (*sum_norm)(const std::complex<double>* x, std::size_t n);
  // out_k = |x_k|^2
  void (*norm)(const std::complex<double>* x, double* out, std::size_t n);
  // out_k += |x_k|^2
  void (*accumulate_norm)(const std::complex<double>* x, double* out, std::size_t n);
  // x_k *= h_k
  void (*cmul)(std::complex<double>* x, const std::complex<double>* h, std::size_t n);
  // y_k += a * x_k   (real scale, complex vectors)
  void (*axpy)(double a, const std::complex<double>* x, std::complex<double>* y, std::size_t n);
  // sum_k a_k * b_k
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

bool isa_supported(Isa isa) noexcept;

/// Table for a specific ISA. Throws std::invalid_argument if the ISA was not
/// compiled in or the CPU lacks it.
const KernelTable& kernels_for(Isa isa);

/// Runtime-selected table (best supported ISA unless overridden by DWDM80_ISA).
const KernelTable& kernels() noexcept;

std::string_view isa_name(Isa isa) noexcept;

namespace detail {
#if defined(DWDM80_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif
}  // namespace detail

}  // namespace dwdm80::simd
