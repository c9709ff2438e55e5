#include "dwdm80/channel/fiber.hpp"

#include <cmath>
#include <stdexcept>

#include "dwdm80/signal/fft.hpp"
#include "dwdm80/simd/kernels.hpp"

namespace dwdm80::channel {

void validate(const LinkSpec& link) {
  if (!(link.length_km >= 0.0)) throw std::invalid_argument("link.length_km must be >= 0");
  if (!(link.wavelength_nm > 0.0)) throw std::invalid_argument("link.wavelength_nm must be > 0");
  if (!(link.attenuation_db_km >= 0.0)) {
    throw std::invalid_argument("link.attenuation_db_km must be >= 0");
  }
  if (link.osnr_db && !std::isfinite(*link.osnr_db)) {
    throw std::invalid_argument("link.osnr_db must be finite");
  }
  for (const auto& f : link.optical_filters) signal::validate(f);
}

double span_loss_db(const LinkSpec& link) { return link.length_km * link.attenuation_db_km; }

double dispersion_beta(double length_km, double dispersion_ps_nm_km, double wavelength_nm) {
  const double d = dispersion_ps_nm_km * 1e-6;  // ps/(nm km) -> s/m^2
  const double l = length_km * 1e3;
  const double lambda = wavelength_nm * 1e-9;
  return d * l * lambda * lambda / kSpeedOfLight;
}

signal::Waveform apply_cd(const signal::Waveform& w, double length_km,
                          double dispersion_ps_nm_km, double wavelength_nm) {
  if (!(length_km >= 0.0)) throw std::invalid_argument("apply_cd: length must be >= 0");
  if (length_km == 0.0 || w.empty()) return w;
  const double beta = dispersion_beta(length_km, dispersion_ps_nm_km, wavelength_nm);
  const std::size_t n = w.size();
  ComplexVector h(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double f = signal::bin_frequency(k, n, w.sample_rate);
    h[k] = std::polar(1.0, -kPi * beta * f * f);
  }
  signal::Waveform out = w;
  signal::fft_inplace(out.samples);
  simd::kernels().cmul(out.samples.data(), h.data(), n);
  signal::ifft_inplace(out.samples);
  return out;
}

double dd_fading_factor(double frequency_hz, double length_km, double dispersion_ps_nm_km,
                        double wavelength_nm) {
  const double beta = dispersion_beta(length_km, dispersion_ps_nm_km, wavelength_nm);
  return std::cos(kPi * beta * frequency_hz * frequency_hz);
}

double fading_null_frequency(int n, double length_km, double dispersion_ps_nm_km,
                             double wavelength_nm) {
  if (n < 1) throw std::invalid_argument("fading null index must be >= 1");
  const double beta = dispersion_beta(length_km, dispersion_ps_nm_km, wavelength_nm);
  if (!(beta > 0.0)) throw std::invalid_argument("fading nulls need nonzero dispersion");
  return std::sqrt((2.0 * n - 1.0) / (2.0 * beta));
}

}  // namespace dwdm80::channel
