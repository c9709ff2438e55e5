#pragma once

#include "dwdm80/common/types.hpp"

namespace dwdm80::signal {

// Thin wrapper over FFTW. Plans are cached per (size, direction); planning is
// serialized, execution is thread-safe.

/// Unnormalized forward DFT: X_k = sum_n x_n exp(-i 2 pi k n / N).
ComplexVector fft(const ComplexVector& x);
/// Inverse DFT including the 1/N factor.
ComplexVector ifft(const ComplexVector& spectrum);

void fft_inplace(ComplexVector& x);
void ifft_inplace(ComplexVector& x);

/// Frequency of DFT bin k for an N-point record at the given sample rate,
/// mapped to [-fs/2, fs/2).
double bin_frequency(std::size_t k, std::size_t n, double sample_rate);

/// Circular cross-correlation c_m = sum_n a_{n+m} conj(b_n), m in [0, N).
ComplexVector circular_xcorr(const ComplexVector& a, const ComplexVector& b);

}  // namespace dwdm80::signal
