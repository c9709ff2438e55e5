#include "dwdm80/channel/noise.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "dwdm80/common/seed.hpp"
#include "dwdm80/simd/kernels.hpp"

namespace dwdm80::channel {
namespace {

ComplexVector gaussian_noise(std::size_t n, double variance, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * variance));
  ComplexVector out(n);
  for (auto& v : out) {
    const double re = normal(rng);
    const double im = normal(rng);
    v = {re, im};
  }
  return out;
}

}  // namespace

double ase_psd(double signal_power_mw, double osnr_db) {
  if (!(signal_power_mw > 0.0)) {
    throw std::invalid_argument("add_ase_noise: signal power must be > 0 (OSNR undefined)");
  }
  const double osnr = std::pow(10.0, osnr_db / 10.0);
  return signal_power_mw / (2.0 * osnr * kOsnrReferenceBandwidth);
}

ReceivedField add_ase_noise(const signal::Waveform& w, std::optional<double> osnr_db,
                            bool include_orthogonal_pol, std::uint64_t seed,
                            std::optional<double> reference_power) {
  ReceivedField out{w, std::nullopt};
  if (!osnr_db) return out;
  const double p = reference_power ? *reference_power : signal::mean_power(w);
  const double variance = ase_psd(p, *osnr_db) * w.sample_rate;

  const ComplexVector n_sig = gaussian_noise(w.size(), variance, derive_seed(seed, 0));
  simd::kernels().axpy(1.0, n_sig.data(), out.signal.samples.data(), w.size());
  if (include_orthogonal_pol) {
    out.orthogonal = signal::Waveform{gaussian_noise(w.size(), variance, derive_seed(seed, 1)),
                                      w.sample_rate, w.center_offset};
  }
  return out;
}

ReceivedField filter_field(const ReceivedField& field, const signal::FilterSpec& f) {
  ReceivedField out{signal::apply_filter(field.signal, f), std::nullopt};
  if (field.orthogonal) out.orthogonal = signal::apply_filter(*field.orthogonal, f);
  return out;
}

ReceivedField propagate(const signal::Waveform& w, const LinkSpec& link, std::uint64_t seed) {
  validate(link);
  const signal::Waveform dispersed =
      apply_cd(w, link.length_km, link.dispersion_ps_nm_km, link.wavelength_nm);
  ReceivedField rx = add_ase_noise(dispersed, link.osnr_db, link.orthogonal_pol_noise, seed);
  for (const auto& f : link.optical_filters) rx = filter_field(rx, f);
  return rx;
}

}  // namespace dwdm80::channel
