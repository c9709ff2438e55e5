#pragma once

#include <span>
#include <vector>

#include "dwdm80/common/types.hpp"

namespace dwdm80::signal {

/// Uniformly sampled complex optical-field record, sqrt(mW) units.
/// center_offset is where this record's 0 Hz sits relative to the WDM
/// composite reference frequency.
struct Waveform {
  ComplexVector samples;
  double sample_rate = 1.0;
  double center_offset = 0.0;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  double duration() const noexcept { return static_cast<double>(samples.size()) / sample_rate; }
};

/// Real-valued electrical record (photocurrent, drive signal).
struct RealSignal {
  RealVector samples;
  double sample_rate = 1.0;

  std::size_t size() const noexcept { return samples.size(); }
};

Waveform make_waveform(ComplexVector samples, double sample_rate, double center_offset = 0.0);

double mean_power(const Waveform& w);
double mean_power(std::span<const Complex> samples);

/// Multiply by exp(i 2 pi df t_k) with t_k = k / fs. Power is unchanged.
/// Content shifted past +-fs/2 aliases; callers keep shifted content in band.
Waveform frequency_shift(const Waveform& w, double df);

/// df rounded to the nearest DFT bin of the record so that the shifted record
/// stays periodic (no wrap discontinuity for later circular filtering).
double snap_to_bin(double df, std::size_t n, double sample_rate);

/// Elementwise sum on a common time base; length is the shortest input.
Waveform sum_waveforms(std::span<const Waveform> ws);

Waveform scale(const Waveform& w, double factor);

/// One-sided-agnostic periodogram |X_k|^2 / N^2 (sums to mean power) with
/// matching bin frequencies in [-fs/2, fs/2).
struct Spectrum {
  RealVector frequency;
  RealVector power;
};
Spectrum power_spectrum(const Waveform& w);

/// Total periodogram power in [f_lo, f_hi].
double band_power(const Spectrum& s, double f_lo, double f_hi);

RealSignal real_part(const Waveform& w);
Waveform to_waveform(const RealSignal& r);

/// Ideal band-limited resampling by an integer factor (zero-padding or
/// truncation of the circular spectrum).
RealSignal upsample(const RealSignal& r, std::size_t factor);
RealSignal downsample(const RealSignal& r, std::size_t factor);

}  // namespace dwdm80::signal
