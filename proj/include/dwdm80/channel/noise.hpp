#pragma once

#include <cstdint>
#include <optional>

#include "dwdm80/channel/fiber.hpp"
#include "dwdm80/signal/waveform.hpp"

namespace dwdm80::channel {

/// Field at the receiver: the signal polarization and, when modeled, the
/// noise-only orthogonal polarization (adds |n|^2 at the photodiode).
struct ReceivedField {
  signal::Waveform signal;
  std::optional<signal::Waveform> orthogonal;
};

/// ASE power spectral density per polarization (mW/Hz) for a signal power
/// and OSNR: OSNR = P / (2 rho B_ref).
double ase_psd(double signal_power_mw, double osnr_db);

/// Adds circular white Gaussian noise of PSD rho per polarization over the
/// record bandwidth (variance rho*fs per sample). std::nullopt OSNR returns
/// the input untouched. reference_power defaults to the record's mean power;
/// WDM composites pass the per-channel power instead.
ReceivedField add_ase_noise(const signal::Waveform& w, std::optional<double> osnr_db,
                            bool include_orthogonal_pol, std::uint64_t seed,
                            std::optional<double> reference_power = std::nullopt);

/// CD, then ASE loading at the link OSNR, then the link's optical filters
/// (applied to both polarizations).
ReceivedField propagate(const signal::Waveform& w, const LinkSpec& link, std::uint64_t seed);

/// Applies an optical filter to both polarizations of a received field.
ReceivedField filter_field(const ReceivedField& field, const signal::FilterSpec& f);

}  // namespace dwdm80::channel
