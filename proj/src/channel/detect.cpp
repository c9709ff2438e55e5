#include "dwdm80/channel/detect.hpp"

#include <stdexcept>

#include "dwdm80/simd/kernels.hpp"

namespace dwdm80::channel {

signal::RealSignal photodetect(const signal::Waveform& w, const signal::Waveform* orthogonal) {
  signal::RealSignal out{RealVector(w.size()), w.sample_rate};
  const auto& k = simd::kernels();
  k.norm(w.samples.data(), out.samples.data(), w.size());
  if (orthogonal != nullptr) {
    if (orthogonal->size() != w.size()) {
      throw std::invalid_argument("photodetect: polarization records differ in length");
    }
    k.accumulate_norm(orthogonal->samples.data(), out.samples.data(), w.size());
  }
  return out;
}

signal::RealSignal photodetect(const ReceivedField& field) {
  return photodetect(field.signal, field.orthogonal ? &*field.orthogonal : nullptr);
}

signal::Waveform optical_matched_filter(const signal::Waveform& w, std::size_t samples_per_symbol,
                                        std::size_t offset) {
  if (samples_per_symbol == 0) throw std::invalid_argument("matched filter: sps must be >= 1");
  const std::size_t n_sym = w.size() / samples_per_symbol;
  signal::Waveform out{ComplexVector(n_sym),
                       w.sample_rate / static_cast<double>(samples_per_symbol), w.center_offset};
  const double inv = 1.0 / static_cast<double>(samples_per_symbol);
  for (std::size_t m = 0; m < n_sym; ++m) {
    Complex acc(0.0);
    for (std::size_t j = 0; j < samples_per_symbol; ++j) {
      acc += w.samples[(offset + m * samples_per_symbol + j) % w.size()];
    }
    out.samples[m] = acc * inv;
  }
  return out;
}

ReceivedField optical_matched_filter(const ReceivedField& field, std::size_t samples_per_symbol,
                                     std::size_t offset) {
  ReceivedField out{optical_matched_filter(field.signal, samples_per_symbol, offset), std::nullopt};
  if (field.orthogonal) {
    out.orthogonal = optical_matched_filter(*field.orthogonal, samples_per_symbol, offset);
  }
  return out;
}

}  // namespace dwdm80::channel
