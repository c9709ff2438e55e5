#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dwdm80/channel/noise.hpp"
#include "dwdm80/signal/filter.hpp"
#include "dwdm80/signal/prbs.hpp"
#include "dwdm80/signal/waveform.hpp"

namespace dwdm80::dmt {

/// Real-valued DMT modem settings. Subcarrier indices refer to the
/// fft_size-point grid at dac_rate; the optical simulation runs at
/// dac_rate * oversampling.
struct DmtConfig {
  std::size_t fft_size = 512;
  std::size_t cp_len = 16;
  std::size_t first_subcarrier = 1;
  std::size_t last_subcarrier = 255;
  double dac_rate = 112e9;
  double clip_ratio_db = 9.5;
  std::size_t training_frames = 32;
  std::size_t oversampling = 2;
  std::optional<signal::FilterSpec> tx_filter;
  std::optional<signal::FilterSpec> rx_filter;
  double sync_floor = 0.05;  // normalized correlation; CD fading lowers it

  std::size_t used_count() const noexcept { return last_subcarrier - first_subcarrier + 1; }
  std::size_t frame_length() const noexcept { return fft_size + cp_len; }
  double subcarrier_spacing() const noexcept { return dac_rate / static_cast<double>(fft_size); }
  double frame_rate() const noexcept { return dac_rate / static_cast<double>(frame_length()); }
  double subcarrier_frequency(std::size_t used_index) const noexcept {
    return static_cast<double>(first_subcarrier + used_index) * subcarrier_spacing();
  }
};

void validate(const DmtConfig& cfg);

/// Per used-subcarrier bits (0, 2, 4, 6, 8) and linear power scale.
/// bits == 0 exactly when power == 0.
struct LoadingTable {
  std::vector<int> bits;
  RealVector power;

  int total_bits() const noexcept;
  std::size_t size() const noexcept { return bits.size(); }

  /// Same order on every subcarrier at unit power (the channel probe).
  static LoadingTable uniform(std::size_t used, int bits_per_subcarrier);
};

void validate(const LoadingTable& table, const DmtConfig& cfg);

/// Per used-subcarrier SNR (linear) and frequency.
struct SnrProfile {
  RealVector snr;
  RealVector frequency;
};

/// Symbols on the used subcarriers of one frame (already power scaled).
using Frame = ComplexVector;

/// Maps a bit stream onto frames. Bits must be a whole number of frames.
std::vector<Frame> map_frames(const signal::BitStream& bits, const LoadingTable& table,
                              const DmtConfig& cfg);

/// Hermitian-mirrored inverse transform of one frame (no cyclic prefix,
/// no clipping). The imaginary part is zero up to rounding.
ComplexVector frame_time_samples(const Frame& frame, const DmtConfig& cfg);

/// Time-domain drive at dac_rate: IFFT per frame with cyclic prefix, clipped
/// at +-clip_ratio times the nominal RMS (unit power on all used
/// subcarriers), before biasing.
RealVector frames_to_drive(std::span<const Frame> frames, const DmtConfig& cfg);

/// Nominal drive RMS for unit power on every used subcarrier.
double nominal_drive_rms(const DmtConfig& cfg);

/// DC bias + ideal DAC interpolation to the simulation rate + TX filter +
/// intensity modulator (field = sqrt of the nonnegative drive), mean optical
/// power 1 mW.
signal::Waveform drive_to_field(const RealVector& drive, const DmtConfig& cfg);

/// map_frames + frames_to_drive + drive_to_field.
signal::Waveform dmt_modulate(const signal::BitStream& bits, const LoadingTable& table,
                              const DmtConfig& cfg);

/// Photodetection, RX filter, and ideal decimation back to dac_rate.
signal::RealSignal dmt_detect(const channel::ReceivedField& field, const DmtConfig& cfg);

/// Sample index of the first frame start, from circular cross-correlation of
/// the detected record with the known transmitted drive over
/// `reference_samples` samples. Throws SyncFailed below cfg.sync_floor.
std::size_t dmt_synchronize(const signal::RealSignal& rx, const RealVector& tx_drive,
                            std::size_t reference_samples, const DmtConfig& cfg);

/// Forward transforms of `count` frames starting at frame index `first`,
/// relative to a record whose frame 0 starts at `start`. The FFT window sits
/// cp_len/2 samples into the cyclic prefix.
std::vector<Frame> extract_frames(const signal::RealSignal& rx, std::size_t start,
                                  std::size_t first, std::size_t count, const DmtConfig& cfg);

/// Per-subcarrier average of rx/tx over the training frames.
ComplexVector estimate_channel(std::span<const Frame> rx_frames, std::span<const Frame> tx_frames);

struct DemodResult {
  signal::BitStream bits;
  /// Equalized unit-energy symbols, indexed [subcarrier][frame].
  std::vector<ComplexVector> symbols;
};

/// One-tap zero-forcing equalization, hard decisions, Gray demapping.
/// `y` must start at a frame boundary (see dmt_synchronize); `frames` frames
/// are demodulated. Throws DeadSubcarrier for a zero estimate on a loaded
/// subcarrier.
DemodResult dmt_demodulate(const signal::RealSignal& y, const LoadingTable& table,
                           const DmtConfig& cfg, const ComplexVector& channel_estimate,
                           std::size_t frames);

/// Frame-domain variant used after extract_frames.
DemodResult demodulate_frames(std::span<const Frame> rx_frames, const LoadingTable& table,
                              const ComplexVector& channel_estimate);

/// Error-vector SNR per subcarrier, E|tx|^2 / E|rx - tx|^2, capped at 60 dB.
/// symbols are indexed [subcarrier][frame]; at least 100 per subcarrier.
SnrProfile estimate_snr(const std::vector<ComplexVector>& rx_symbols,
                        const std::vector<ComplexVector>& tx_symbols, const DmtConfig& cfg);

inline constexpr double kSnrCapDb = 60.0;

/// Optical path between modulator and photodiode.
using OpticalChannel =
    std::function<channel::ReceivedField(const signal::Waveform&, std::uint64_t seed)>;

/// Outcome of one training + payload transmission.
struct DmtRun {
  signal::BitStream tx_bits;
  signal::BitStream rx_bits;
  std::vector<ComplexVector> rx_symbols;  // [subcarrier][frame], equalized
  std::vector<ComplexVector> tx_symbols;  // [subcarrier][frame], unit energy
  ComplexVector channel_estimate;
  std::size_t sync_offset = 0;
};

/// Transmits cfg.training_frames known uniform-QPSK frames followed by
/// payload_frames frames loaded per `table` with random payload bits, passes
/// them through `channel`, and demodulates the payload.
DmtRun run_dmt_link(const LoadingTable& table, const DmtConfig& cfg, std::size_t payload_frames,
                    const OpticalChannel& channel, std::uint64_t seed);

}  // namespace dwdm80::dmt
