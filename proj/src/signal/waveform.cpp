#include "dwdm80/signal/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dwdm80/signal/fft.hpp"
#include "dwdm80/simd/kernels.hpp"

namespace dwdm80::signal {

Waveform make_waveform(ComplexVector samples, double sample_rate, double center_offset) {
  if (!(sample_rate > 0.0)) throw std::invalid_argument("waveform: sample_rate must be > 0");
  return Waveform{std::move(samples), sample_rate, center_offset};
}

double mean_power(std::span<const Complex> samples) {
  if (samples.empty()) throw std::invalid_argument("mean_power: empty waveform");
  return simd::kernels().sum_norm(samples.data(), samples.size()) /
         static_cast<double>(samples.size());
}

double mean_power(const Waveform& w) { return mean_power(std::span<const Complex>(w.samples)); }

Waveform frequency_shift(const Waveform& w, double df) {
  Waveform out = w;
  out.center_offset += df;
  if (df == 0.0) return out;
  // Direct phase evaluation per sample keeps the +df/-df round trip exact to
  // rounding; a recursive phasor would drift over long records.
  const double step = 2.0 * kPi * df / w.sample_rate;
  for (std::size_t k = 0; k < out.samples.size(); ++k) {
    out.samples[k] *= std::polar(1.0, step * static_cast<double>(k));
  }
  return out;
}

double snap_to_bin(double df, std::size_t n, double sample_rate) {
  if (n == 0) return df;
  const double bin = sample_rate / static_cast<double>(n);
  return std::round(df / bin) * bin;
}

Waveform sum_waveforms(std::span<const Waveform> ws) {
  if (ws.empty()) throw std::invalid_argument("sum_waveforms: no inputs");
  std::size_t n = ws.front().size();
  for (const auto& w : ws) {
    if (w.sample_rate != ws.front().sample_rate) {
      throw std::invalid_argument("sum_waveforms: mismatched sample rates");
    }
    n = std::min(n, w.size());
  }
  Waveform out{ComplexVector(n), ws.front().sample_rate, 0.0};
  const auto& k = simd::kernels();
  for (const auto& w : ws) k.axpy(1.0, w.samples.data(), out.samples.data(), n);
  return out;
}

Waveform scale(const Waveform& w, double factor) {
  Waveform out = w;
  for (auto& v : out.samples) v *= factor;
  return out;
}

Spectrum power_spectrum(const Waveform& w) {
  const std::size_t n = w.size();
  ComplexVector x = fft(w.samples);
  Spectrum s{RealVector(n), RealVector(n)};
  const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    s.frequency[k] = bin_frequency(k, n, w.sample_rate);
    s.power[k] = std::norm(x[k]) * norm;
  }
  return s;
}

double band_power(const Spectrum& s, double f_lo, double f_hi) {
  double acc = 0.0;
  for (std::size_t k = 0; k < s.frequency.size(); ++k) {
    if (s.frequency[k] >= f_lo && s.frequency[k] <= f_hi) acc += s.power[k];
  }
  return acc;
}

RealSignal real_part(const Waveform& w) {
  RealSignal r{RealVector(w.size()), w.sample_rate};
  for (std::size_t k = 0; k < w.size(); ++k) r.samples[k] = w.samples[k].real();
  return r;
}

Waveform to_waveform(const RealSignal& r) {
  Waveform w{ComplexVector(r.size()), r.sample_rate, 0.0};
  for (std::size_t k = 0; k < r.size(); ++k) w.samples[k] = {r.samples[k], 0.0};
  return w;
}

RealSignal upsample(const RealSignal& r, std::size_t factor) {
  if (factor == 0) throw std::invalid_argument("upsample: factor must be >= 1");
  if (factor == 1) return r;
  const std::size_t n = r.size();
  const std::size_t m = n * factor;
  ComplexVector x = fft(to_waveform(r).samples);
  ComplexVector y(m);
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < half; ++k) y[k] = x[k];
  for (std::size_t k = half + 1; k < n; ++k) y[m - n + k] = x[k];
  if (n % 2 == 0) {
    // Split the Nyquist bin so the result stays real.
    y[half] = 0.5 * x[half];
    y[m - half] = 0.5 * x[half];
  } else {
    y[half] = x[half];
  }
  ifft_inplace(y);
  RealSignal out{RealVector(m), r.sample_rate * static_cast<double>(factor)};
  const double gain = static_cast<double>(factor);
  for (std::size_t k = 0; k < m; ++k) out.samples[k] = y[k].real() * gain;
  return out;
}

RealSignal downsample(const RealSignal& r, std::size_t factor) {
  if (factor == 0) throw std::invalid_argument("downsample: factor must be >= 1");
  if (factor == 1) return r;
  if (r.size() % factor != 0) throw std::invalid_argument("downsample: length not divisible");
  const std::size_t m = r.size();
  const std::size_t n = m / factor;
  ComplexVector x = fft(to_waveform(r).samples);
  ComplexVector y(n);
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < half; ++k) y[k] = x[k];
  for (std::size_t k = half + 1; k < n; ++k) y[k] = x[m - n + k];
  if (n % 2 == 0) {
    y[half] = x[half] + x[m - half];
  } else {
    y[half] = x[half];
  }
  ifft_inplace(y);
  RealSignal out{RealVector(n), r.sample_rate / static_cast<double>(factor)};
  const double gain = 1.0 / static_cast<double>(factor);
  for (std::size_t k = 0; k < n; ++k) out.samples[k] = y[k].real() * gain;
  return out;
}

}  // namespace dwdm80::signal
