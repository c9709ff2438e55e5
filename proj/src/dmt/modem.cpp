#include "dwdm80/dmt/modem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dwdm80/channel/detect.hpp"
#include "dwdm80/common/error.hpp"
#include "dwdm80/common/seed.hpp"
#include "dwdm80/dmt/qam.hpp"
#include "dwdm80/signal/fft.hpp"

namespace dwdm80::dmt {

void validate(const DmtConfig& cfg) {
  if (cfg.fft_size < 4 || cfg.fft_size % 2 != 0) {
    throw std::invalid_argument("dmt.fft_size must be even and >= 4");
  }
  if (cfg.cp_len >= cfg.fft_size) throw std::invalid_argument("dmt.cp_len must be < fft_size");
  if (cfg.first_subcarrier < 1 || cfg.last_subcarrier >= cfg.fft_size / 2 ||
      cfg.first_subcarrier > cfg.last_subcarrier) {
    throw std::invalid_argument("dmt: used subcarriers must lie in [1, fft_size/2 - 1]");
  }
  if (!(cfg.dac_rate > 0.0)) throw std::invalid_argument("dmt.dac_rate must be > 0");
  if (cfg.oversampling < 1) throw std::invalid_argument("dmt.oversampling must be >= 1");
  if (cfg.training_frames < 1) throw std::invalid_argument("dmt.training_frames must be >= 1");
  if (!std::isfinite(cfg.clip_ratio_db)) throw std::invalid_argument("dmt.clip_ratio_db must be finite");
}

int LoadingTable::total_bits() const noexcept { return std::accumulate(bits.begin(), bits.end(), 0); }

LoadingTable LoadingTable::uniform(std::size_t used, int bits_per_subcarrier) {
  LoadingTable t;
  t.bits.assign(used, bits_per_subcarrier);
  t.power.assign(used, bits_per_subcarrier > 0 ? 1.0 : 0.0);
  return t;
}

void validate(const LoadingTable& table, const DmtConfig& cfg) {
  if (table.bits.size() != cfg.used_count() || table.power.size() != cfg.used_count()) {
    throw std::invalid_argument("loading table size does not match used subcarrier count");
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    const int b = table.bits[i];
    if (b != 0 && !valid_qam_bits(b)) {
      throw std::invalid_argument("loading table: bits must be 0, 2, 4, 6 or 8");
    }
    if (!(table.power[i] >= 0.0)) throw std::invalid_argument("loading table: negative power");
    if ((b == 0) != (table.power[i] == 0.0)) {
      throw std::invalid_argument("loading table: bits == 0 must coincide with power == 0 (subcarrier " +
                                  std::to_string(i) + ")");
    }
  }
}

std::vector<Frame> map_frames(const signal::BitStream& bits, const LoadingTable& table,
                              const DmtConfig& cfg) {
  validate(cfg);
  validate(table, cfg);
  const auto per_frame = static_cast<std::size_t>(table.total_bits());
  if (per_frame == 0) {
    if (!bits.bits.empty()) throw std::invalid_argument("dmt_modulate: bits given for an empty table");
    return {};
  }
  if (bits.size() % per_frame != 0) {
    throw std::invalid_argument("dmt_modulate: bit count is not a multiple of bits per frame");
  }
  const std::size_t n_frames = bits.size() / per_frame;
  std::vector<Frame> frames(n_frames, Frame(table.size()));
  std::size_t pos = 0;
  for (auto& frame : frames) {
    for (std::size_t i = 0; i < table.size(); ++i) {
      const int b = table.bits[i];
      if (b == 0) continue;
      frame[i] = std::sqrt(table.power[i]) * qam_map(&bits.bits[pos], b);
      pos += static_cast<std::size_t>(b);
    }
  }
  return frames;
}

ComplexVector frame_time_samples(const Frame& frame, const DmtConfig& cfg) {
  if (frame.size() != cfg.used_count()) throw std::invalid_argument("frame size mismatch");
  ComplexVector spec(cfg.fft_size, Complex(0.0));
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const std::size_t k = cfg.first_subcarrier + i;
    spec[k] = frame[i];
    spec[cfg.fft_size - k] = std::conj(frame[i]);
  }
  signal::ifft_inplace(spec);
  return spec;
}

double nominal_drive_rms(const DmtConfig& cfg) {
  return std::sqrt(2.0 * static_cast<double>(cfg.used_count())) / static_cast<double>(cfg.fft_size);
}

RealVector frames_to_drive(std::span<const Frame> frames, const DmtConfig& cfg) {
  validate(cfg);
  const std::size_t n = cfg.fft_size;
  const std::size_t cp = cfg.cp_len;
  const double clip = std::pow(10.0, cfg.clip_ratio_db / 20.0) * nominal_drive_rms(cfg);
  RealVector drive;
  drive.reserve(frames.size() * cfg.frame_length());
  for (const auto& frame : frames) {
    const ComplexVector t = frame_time_samples(frame, cfg);
    for (std::size_t i = n - cp; i < n; ++i) drive.push_back(std::clamp(t[i].real(), -clip, clip));
    for (std::size_t i = 0; i < n; ++i) drive.push_back(std::clamp(t[i].real(), -clip, clip));
  }
  return drive;
}

signal::Waveform drive_to_field(const RealVector& drive, const DmtConfig& cfg) {
  if (drive.empty()) throw std::invalid_argument("dmt: empty drive");
  const double bias = std::pow(10.0, cfg.clip_ratio_db / 20.0) * nominal_drive_rms(cfg);
  signal::RealSignal intensity{drive, cfg.dac_rate};
  for (auto& v : intensity.samples) v += bias;
  intensity = signal::upsample(intensity, cfg.oversampling);
  if (cfg.tx_filter) intensity = signal::apply_filter(intensity, *cfg.tx_filter);
  double mean = 0.0;
  for (auto& v : intensity.samples) {
    v = std::max(v, 0.0);
    mean += v;
  }
  mean /= static_cast<double>(intensity.size());
  if (!(mean > 0.0)) throw std::invalid_argument("dmt: zero optical power");
  signal::Waveform w{ComplexVector(intensity.size()), intensity.sample_rate, 0.0};
  for (std::size_t i = 0; i < intensity.size(); ++i) {
    w.samples[i] = {std::sqrt(intensity.samples[i] / mean), 0.0};
  }
  return w;
}

signal::Waveform dmt_modulate(const signal::BitStream& bits, const LoadingTable& table,
                              const DmtConfig& cfg) {
  std::vector<Frame> frames = map_frames(bits, table, cfg);
  if (frames.empty()) {
    // No loaded subcarriers: a constant bias over one frame per call.
    frames.assign(1, Frame(cfg.used_count(), Complex(0.0)));
  }
  return drive_to_field(frames_to_drive(frames, cfg), cfg);
}

signal::RealSignal dmt_detect(const channel::ReceivedField& field, const DmtConfig& cfg) {
  signal::RealSignal y = channel::photodetect(field);
  if (cfg.rx_filter) y = signal::apply_filter(y, *cfg.rx_filter);
  const double ratio = y.sample_rate / cfg.dac_rate;
  const auto factor = static_cast<std::size_t>(std::llround(ratio));
  if (factor < 1 || std::abs(ratio - static_cast<double>(factor)) > 1e-9) {
    throw std::invalid_argument("dmt_detect: sample rate is not a multiple of the DAC rate");
  }
  return signal::downsample(y, factor);
}

std::size_t dmt_synchronize(const signal::RealSignal& rx, const RealVector& tx_drive,
                            std::size_t reference_samples, const DmtConfig& cfg) {
  const std::size_t n = rx.size();
  if (tx_drive.size() != n || reference_samples == 0 || reference_samples > n) {
    throw std::invalid_argument("dmt_synchronize: reference does not match record");
  }
  const double rx_mean = std::accumulate(rx.samples.begin(), rx.samples.end(), 0.0) / static_cast<double>(n);
  ComplexVector a(n);
  ComplexVector b(n, Complex(0.0));
  for (std::size_t i = 0; i < n; ++i) a[i] = rx.samples[i] - rx_mean;
  double ref_mean = 0.0;
  for (std::size_t i = 0; i < reference_samples; ++i) ref_mean += tx_drive[i];
  ref_mean /= static_cast<double>(reference_samples);
  double ref_energy = 0.0;
  for (std::size_t i = 0; i < reference_samples; ++i) {
    b[i] = tx_drive[i] - ref_mean;
    ref_energy += std::norm(b[i]);
  }
  const ComplexVector c = signal::circular_xcorr(a, b);
  std::size_t peak = 0;
  // Fading can invert the detected waveform, so the peak is taken in magnitude.
  for (std::size_t m = 1; m < n; ++m) {
    if (std::abs(c[m].real()) > std::abs(c[peak].real())) peak = m;
  }
  double seg = 0.0;
  for (std::size_t i = 0; i < reference_samples; ++i) seg += std::norm(a[(peak + i) % n]);
  const double score = (seg > 0.0 && ref_energy > 0.0) ? std::abs(c[peak].real()) / std::sqrt(seg * ref_energy) : 0.0;
  if (!(score >= cfg.sync_floor)) throw SyncFailed(score, cfg.sync_floor);
  return peak;
}

std::vector<Frame> extract_frames(const signal::RealSignal& rx, std::size_t start,
                                  std::size_t first, std::size_t count, const DmtConfig& cfg) {
  const std::size_t n = cfg.fft_size;
  const std::size_t len = cfg.frame_length();
  const std::size_t backoff = cfg.cp_len / 2;
  const std::size_t total = rx.size();
  std::vector<Frame> out;
  out.reserve(count);
  ComplexVector buf(n);
  for (std::size_t f = first; f < first + count; ++f) {
    const std::size_t base = start + f * len + cfg.cp_len - backoff;
    for (std::size_t i = 0; i < n; ++i) buf[i] = rx.samples[(base + i) % total];
    signal::fft_inplace(buf);
    Frame frame(cfg.used_count());
    // Undo the window's lead into the prefix (a pure delay of `backoff` samples).
    for (std::size_t i = 0; i < frame.size(); ++i) {
      const std::size_t k = cfg.first_subcarrier + i;
      const double phase = 2.0 * kPi * static_cast<double>(k * backoff) / static_cast<double>(n);
      frame[i] = buf[k] * std::polar(1.0, phase);
    }
    out.push_back(std::move(frame));
  }
  return out;
}

ComplexVector estimate_channel(std::span<const Frame> rx_frames, std::span<const Frame> tx_frames) {
  if (rx_frames.empty() || rx_frames.size() != tx_frames.size()) {
    throw std::invalid_argument("estimate_channel: need >= 1 training frame pair");
  }
  const std::size_t used = tx_frames.front().size();
  ComplexVector h(used, Complex(0.0));
  for (std::size_t f = 0; f < rx_frames.size(); ++f) {
    if (rx_frames[f].size() != used || tx_frames[f].size() != used) {
      throw std::invalid_argument("estimate_channel: frame size mismatch");
    }
    for (std::size_t i = 0; i < used; ++i) {
      if (tx_frames[f][i] == Complex(0.0)) {
        throw std::invalid_argument("estimate_channel: zero training symbol on subcarrier " +
                                    std::to_string(i));
      }
      h[i] += rx_frames[f][i] / tx_frames[f][i];
    }
  }
  for (auto& v : h) v /= static_cast<double>(rx_frames.size());
  return h;
}

DemodResult demodulate_frames(std::span<const Frame> rx_frames, const LoadingTable& table,
                              const ComplexVector& channel_estimate) {
  const std::size_t used = table.size();
  if (channel_estimate.size() != used) throw std::invalid_argument("demodulate: estimate size mismatch");
  for (std::size_t i = 0; i < used; ++i) {
    if (table.bits[i] > 0 && std::abs(channel_estimate[i]) == 0.0) throw DeadSubcarrier(i);
  }
  DemodResult out;
  out.bits.origin = "dmt-demod";
  out.bits.bits.reserve(rx_frames.size() * static_cast<std::size_t>(table.total_bits()));
  out.symbols.assign(used, ComplexVector(rx_frames.size()));
  std::uint8_t tmp[8];
  for (std::size_t f = 0; f < rx_frames.size(); ++f) {
    for (std::size_t i = 0; i < used; ++i) {
      const int b = table.bits[i];
      if (b == 0) continue;
      const Complex z = rx_frames[f][i] / channel_estimate[i] / std::sqrt(table.power[i]);
      out.symbols[i][f] = z;
      qam_demap(z, b, tmp);
      out.bits.bits.insert(out.bits.bits.end(), tmp, tmp + b);
    }
  }
  return out;
}

DemodResult dmt_demodulate(const signal::RealSignal& y, const LoadingTable& table,
                           const DmtConfig& cfg, const ComplexVector& channel_estimate,
                           std::size_t frames) {
  validate(table, cfg);
  const auto rx = extract_frames(y, 0, 0, frames, cfg);
  return demodulate_frames(rx, table, channel_estimate);
}

SnrProfile estimate_snr(const std::vector<ComplexVector>& rx_symbols,
                        const std::vector<ComplexVector>& tx_symbols, const DmtConfig& cfg) {
  if (rx_symbols.size() != tx_symbols.size()) throw std::invalid_argument("estimate_snr: size mismatch");
  SnrProfile out;
  out.snr.resize(rx_symbols.size());
  out.frequency.resize(rx_symbols.size());
  const double cap = std::pow(10.0, kSnrCapDb / 10.0);
  for (std::size_t i = 0; i < rx_symbols.size(); ++i) {
    const auto& r = rx_symbols[i];
    const auto& t = tx_symbols[i];
    if (r.size() != t.size()) throw std::invalid_argument("estimate_snr: stream length mismatch");
    if (r.size() < 100) {
      throw std::invalid_argument("estimate_snr: fewer than 100 symbols on subcarrier " +
                                  std::to_string(i));
    }
    double ps = 0.0;
    double pe = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      ps += std::norm(t[k]);
      pe += std::norm(r[k] - t[k]);
    }
    out.snr[i] = (pe > 0.0) ? std::min(ps / pe, cap) : cap;
    out.frequency[i] = cfg.subcarrier_frequency(i);
  }
  return out;
}

DmtRun run_dmt_link(const LoadingTable& table, const DmtConfig& cfg, std::size_t payload_frames,
                    const OpticalChannel& channel, std::uint64_t seed) {
  validate(cfg);
  validate(table, cfg);
  const std::size_t used = cfg.used_count();
  const LoadingTable training_table = LoadingTable::uniform(used, 2);
  const signal::BitStream training_bits = signal::random_bits(
      derive_seed(seed, 0), cfg.training_frames * static_cast<std::size_t>(training_table.total_bits()));
  const std::vector<Frame> training = map_frames(training_bits, training_table, cfg);

  DmtRun run;
  run.tx_bits = signal::random_bits(derive_seed(seed, 1),
                                    payload_frames * static_cast<std::size_t>(table.total_bits()));
  std::vector<Frame> payload = map_frames(run.tx_bits, table, cfg);
  if (payload.empty()) payload.assign(payload_frames, Frame(used, Complex(0.0)));

  std::vector<Frame> all = training;
  all.insert(all.end(), payload.begin(), payload.end());
  const RealVector drive = frames_to_drive(all, cfg);
  const signal::Waveform field = drive_to_field(drive, cfg);
  const channel::ReceivedField rx_field = channel(field, derive_seed(seed, 2));
  const signal::RealSignal rx = dmt_detect(rx_field, cfg);

  run.sync_offset = dmt_synchronize(rx, drive, training.size() * cfg.frame_length(), cfg);
  const auto rx_training = extract_frames(rx, run.sync_offset, 0, training.size(), cfg);
  run.channel_estimate = estimate_channel(rx_training, training);
  const auto rx_payload = extract_frames(rx, run.sync_offset, training.size(), payload_frames, cfg);
  DemodResult demod = demodulate_frames(rx_payload, table, run.channel_estimate);
  run.rx_bits = std::move(demod.bits);
  run.rx_symbols = std::move(demod.symbols);

  run.tx_symbols.assign(used, ComplexVector(payload_frames));
  for (std::size_t f = 0; f < payload_frames; ++f) {
    for (std::size_t i = 0; i < used; ++i) {
      if (table.bits[i] > 0) run.tx_symbols[i][f] = payload[f][i] / std::sqrt(table.power[i]);
    }
  }
  return run;
}

}  // namespace dwdm80::dmt
