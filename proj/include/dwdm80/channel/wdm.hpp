#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dwdm80/signal/filter.hpp"
#include "dwdm80/signal/waveform.hpp"

namespace dwdm80::channel {

/// Channel plan on a fixed grid. Slot i sits at (i - (n-1)/2) * grid_spacing
/// relative to the composite center; each channel's carrier is placed at its
/// slot plus detuning[i] (positive detuning moves the carrier above the slot
/// filter center, so the filter edge trims the upper sideband).
struct WdmPlan {
  int channel_count = 8;
  double grid_spacing = 50e9;       // Hz
  double per_channel_rate = 56e9;   // b/s, bookkeeping only
  std::vector<double> detuning;     // Hz per channel; empty means all zero
  double composite_rate = 448e9;    // sample rate of the multiplexed record
  // Channel-selection passband used by the demultiplexer, and optionally by
  // the multiplexer. Centered on the slot; the period is widened to the
  // composite bandwidth so only one passband lies on the grid.
  signal::FilterSpec channel_filter = signal::FilterSpec::interleaver(42e9, 100e9, 0.0, 3);
  bool filter_at_mux = true;

  static WdmPlan uniform(int channels, double grid_hz, double rate_bps, double detuning_hz,
                         double composite_rate_hz = 448e9);
};

void validate(const WdmPlan& plan);

double slot_center(const WdmPlan& plan, int index);
double channel_detuning(const WdmPlan& plan, int index);
double aggregate_rate(const WdmPlan& plan);

/// The per-slot filter used by mux/demux.
signal::FilterSpec slot_filter(const WdmPlan& plan, int index);

/// Upsamples each channel to the composite rate (integer ratio required),
/// shifts it to slot + detuning, optionally applies the slot filter, and sums.
signal::Waveform wdm_mux(std::span<const signal::Waveform> channels, const WdmPlan& plan);

/// Slot filter centered on channel `index`, then the slot is shifted to 0 Hz.
/// Leakage from neighbors is kept: it is the linear crosstalk.
signal::Waveform wdm_demux(const signal::Waveform& w, const WdmPlan& plan, int index);

/// Ideal band-limited complex resampling by an integer factor.
signal::Waveform upsample(const signal::Waveform& w, std::size_t factor);

}  // namespace dwdm80::channel
