#include "dwdm80/simd/kernels.hpp"

namespace dwdm80::simd {
namespace {

double sum_norm_scalar(const std::complex<double>* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return acc;
}

void norm_scalar(const std::complex<double>* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
}

void accumulate_norm_scalar(const std::complex<double>* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
}

void cmul_scalar(std::complex<double>* x, const std::complex<double>* h, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = x[i].real() * h[i].real() - x[i].imag() * h[i].imag();
    const double im = x[i].real() * h[i].imag() + x[i].imag() * h[i].real();
    x[i] = {re, im};
  }
}

void axpy_scalar(double a, const std::complex<double>* x, std::complex<double>* y,
                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = {y[i].real() + a * x[i].real(), y[i].imag() + a * x[i].imag()};
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

constexpr KernelTable kScalar{Isa::scalar,  &sum_norm_scalar, &norm_scalar,
                              &accumulate_norm_scalar, &cmul_scalar,
                              &axpy_scalar, &dot_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace dwdm80::simd
