#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dwdm80/signal/filter.hpp"
#include "dwdm80/signal/waveform.hpp"

namespace dwdm80::channel {

/// One simulated link leg. OSNR is referred to 12.5 GHz and counts ASE in
/// both polarizations; std::nullopt means a noiseless link.
struct LinkSpec {
  double length_km = 0.0;
  double dispersion_ps_nm_km = 17.0;
  double attenuation_db_km = 0.2;
  double wavelength_nm = 1550.0;
  std::optional<double> osnr_db;
  std::vector<signal::FilterSpec> optical_filters;  // applied after noise loading
  bool orthogonal_pol_noise = true;
};

void validate(const LinkSpec& link);

/// Span loss for power-budget reporting. Noise-loaded simulations set the
/// OSNR at the receiver, so the loss is not applied to the samples.
double span_loss_db(const LinkSpec& link);

/// Accumulated dispersion term D*L*lambda^2/c in seconds^2, the quantity that
/// sets both the CD phase and the fading nulls.
double dispersion_beta(double length_km, double dispersion_ps_nm_km, double wavelength_nm);

/// All-pass H(f) = exp(-i pi D L lambda^2 f^2 / c) around the record's 0 Hz.
signal::Waveform apply_cd(const signal::Waveform& w, double length_km,
                          double dispersion_ps_nm_km = 17.0, double wavelength_nm = 1550.0);

/// Small-signal intensity transfer of a DSB signal after CD and square-law
/// detection: cos(pi D L lambda^2 f^2 / c).
double dd_fading_factor(double frequency_hz, double length_km,
                        double dispersion_ps_nm_km = 17.0, double wavelength_nm = 1550.0);

/// n-th power-fading null (n >= 1): sqrt((2n-1) c / (2 D L lambda^2)).
double fading_null_frequency(int n, double length_km, double dispersion_ps_nm_km = 17.0,
                             double wavelength_nm = 1550.0);

}  // namespace dwdm80::channel
