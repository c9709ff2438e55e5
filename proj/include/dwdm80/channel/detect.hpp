#pragma once

#include <cstddef>

#include "dwdm80/channel/noise.hpp"
#include "dwdm80/signal/waveform.hpp"

namespace dwdm80::channel {

/// Square-law photodiode with unit responsivity: y = |x|^2 (+ |n_perp|^2).
signal::RealSignal photodetect(const signal::Waveform& w,
                               const signal::Waveform* orthogonal = nullptr);
signal::RealSignal photodetect(const ReceivedField& field);

/// Optical integrate-and-dump over each symbol (the matched filter for NRZ
/// pulses): output sample m is the mean of input samples
/// [offset + m*sps, offset + (m+1)*sps), circularly indexed.
signal::Waveform optical_matched_filter(const signal::Waveform& w, std::size_t samples_per_symbol,
                                        std::size_t offset = 0);
ReceivedField optical_matched_filter(const ReceivedField& field, std::size_t samples_per_symbol,
                                     std::size_t offset = 0);

}  // namespace dwdm80::channel
