#pragma once

#include "dwdm80/common/types.hpp"
#include "dwdm80/signal/waveform.hpp"

namespace dwdm80::signal {

enum class FilterKind { bessel_lowpass, interleaver, rectangular_lowpass };

/// bessel_lowpass: analog Bessel prototype of `order`, -3 dB at `bandwidth`.
/// rectangular_lowpass: brick wall passing |f| <= `bandwidth`.
/// interleaver: periodic super-Gaussian passband of -3 dB full width
/// `bandwidth` repeating every `period`, one passband centered at `center`;
/// `order` is the super-Gaussian order (exponent 2*order).
struct FilterSpec {
  FilterKind kind = FilterKind::bessel_lowpass;
  int order = 5;
  double bandwidth = 0.0;  // Hz
  double period = 0.0;     // Hz, interleaver only
  double center = 0.0;     // Hz

  static FilterSpec bessel(double cutoff_hz, int order = 5);
  static FilterSpec rectangular(double cutoff_hz);
  static FilterSpec interleaver(double bandwidth_hz = 42e9, double period_hz = 100e9,
                                double center_hz = 0.0, int order = 3);
};

/// Throws std::invalid_argument when the spec violates its own invariants.
void validate(const FilterSpec& f);

/// Complex transfer function at baseband frequency f (Hz).
Complex transfer(const FilterSpec& f, double frequency);

/// Transfer sampled on the DFT grid of an n-point record.
ComplexVector transfer_on_grid(const FilterSpec& f, std::size_t n, double sample_rate);

/// Frequency-domain filtering on the record's circular grid. Lowpass kinds
/// with cutoff at or above Nyquist are rejected.
Waveform apply_filter(const Waveform& w, const FilterSpec& f);
RealSignal apply_filter(const RealSignal& r, const FilterSpec& f);

/// Normalized -3 dB frequency (rad/s) of the unit-delay Bessel prototype.
double bessel_prototype_cutoff(int order);

}  // namespace dwdm80::signal
