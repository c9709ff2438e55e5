#include "dwdm80/channel/wdm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dwdm80/signal/fft.hpp"

namespace dwdm80::channel {

WdmPlan WdmPlan::uniform(int channels, double grid_hz, double rate_bps, double detuning_hz,
                         double composite_rate_hz) {
  WdmPlan plan;
  plan.channel_count = channels;
  plan.grid_spacing = grid_hz;
  plan.per_channel_rate = rate_bps;
  plan.detuning.assign(static_cast<std::size_t>(std::max(channels, 0)), detuning_hz);
  plan.composite_rate = composite_rate_hz;
  return plan;
}

void validate(const WdmPlan& plan) {
  if (plan.channel_count < 1) throw std::invalid_argument("wdm.channel_count must be >= 1");
  if (!(plan.grid_spacing > 0.0)) throw std::invalid_argument("wdm.grid_spacing must be > 0");
  if (!plan.detuning.empty() &&
      plan.detuning.size() != static_cast<std::size_t>(plan.channel_count)) {
    throw std::invalid_argument("wdm.detuning must have one entry per channel");
  }
  for (double d : plan.detuning) {
    if (std::abs(d) > 0.5 * plan.grid_spacing) {
      throw std::invalid_argument("wdm.detuning must not exceed half the grid spacing");
    }
  }
  // Complex sampling: every slot (+-grid/2 around its center) must sit inside
  // [-fs/2, fs/2).
  const double edge = 0.5 * (plan.channel_count - 1) * plan.grid_spacing + 0.5 * plan.grid_spacing;
  if (edge > 0.5 * plan.composite_rate + 1e-3) {
    throw std::invalid_argument("wdm: composite sample rate too low for the occupied grid");
  }
  signal::validate(plan.channel_filter);
}

double slot_center(const WdmPlan& plan, int index) {
  return (index - 0.5 * (plan.channel_count - 1)) * plan.grid_spacing;
}

double channel_detuning(const WdmPlan& plan, int index) {
  return plan.detuning.empty() ? 0.0 : plan.detuning[static_cast<std::size_t>(index)];
}

double aggregate_rate(const WdmPlan& plan) { return plan.channel_count * plan.per_channel_rate; }

signal::FilterSpec slot_filter(const WdmPlan& plan, int index) {
  signal::FilterSpec f = plan.channel_filter;
  f.center = slot_center(plan, index);
  f.period = std::max(f.period, plan.composite_rate);
  return f;
}

signal::Waveform upsample(const signal::Waveform& w, std::size_t factor) {
  if (factor == 0) throw std::invalid_argument("upsample: factor must be >= 1");
  if (factor == 1) return w;
  const std::size_t n = w.size();
  const std::size_t m = n * factor;
  ComplexVector x = signal::fft(w.samples);
  ComplexVector y(m);
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < half; ++k) y[k] = x[k];
  for (std::size_t k = half + 1; k < n; ++k) y[m - n + k] = x[k];
  if (n % 2 == 0) {
    y[half] = 0.5 * x[half];
    y[m - half] = 0.5 * x[half];
  } else {
    y[half] = x[half];
  }
  signal::ifft_inplace(y);
  for (auto& v : y) v *= static_cast<double>(factor);
  return signal::Waveform{std::move(y), w.sample_rate * static_cast<double>(factor),
                          w.center_offset};
}

signal::Waveform wdm_mux(std::span<const signal::Waveform> channels, const WdmPlan& plan) {
  validate(plan);
  if (channels.size() != static_cast<std::size_t>(plan.channel_count)) {
    throw std::invalid_argument("wdm_mux: channel count does not match plan");
  }
  std::vector<signal::Waveform> placed;
  placed.reserve(channels.size());
  for (int i = 0; i < plan.channel_count; ++i) {
    const auto& ch = channels[static_cast<std::size_t>(i)];
    const double ratio = plan.composite_rate / ch.sample_rate;
    const auto factor = static_cast<std::size_t>(std::llround(ratio));
    if (factor < 1 || std::abs(ratio - static_cast<double>(factor)) > 1e-9) {
      throw std::invalid_argument("wdm_mux: channel rate must divide the composite rate");
    }
    signal::Waveform up = upsample(ch, factor);
    const double shift = signal::snap_to_bin(slot_center(plan, i) + channel_detuning(plan, i),
                                             up.size(), up.sample_rate);
    up = signal::frequency_shift(up, shift);
    if (plan.filter_at_mux) up = signal::apply_filter(up, slot_filter(plan, i));
    placed.push_back(std::move(up));
  }
  signal::Waveform out = signal::sum_waveforms(placed);
  out.center_offset = 0.0;
  return out;
}

signal::Waveform wdm_demux(const signal::Waveform& w, const WdmPlan& plan, int index) {
  validate(plan);
  if (index < 0 || index >= plan.channel_count) {
    throw std::invalid_argument("wdm_demux: index " + std::to_string(index) + " out of range");
  }
  const signal::Waveform filtered = signal::apply_filter(w, slot_filter(plan, index));
  const double shift = signal::snap_to_bin(-slot_center(plan, index), w.size(), w.sample_rate);
  return signal::frequency_shift(filtered, shift);
}

}  // namespace dwdm80::channel
