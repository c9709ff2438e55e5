#pragma once

#include <cstdint>

#include "dwdm80/dmt/modem.hpp"

namespace dwdm80::dmt {

inline constexpr int kMaxBitsPerSubcarrier = 8;

struct Loading {
  LoadingTable table;
  /// Power budget over the power the allocation needs at the gap, in dB.
  /// Negative when the target rate is only reachable below the design BER.
  double margin_db = 0.0;
};

/// Power needed on a subcarrier of probe SNR `snr` to carry `bits` at gap Γ,
/// relative to the probe power: Γ (2^bits - 1) / snr.
double required_power(int bits, double snr, double gap);

/// Margin-adaptive greedy loading. Grants +2 bits at a time to the
/// subcarrier with the lowest incremental power Γ (2^(b+2) - 2^b) / snr until
/// target_bits are placed. Subcarriers with snr < 3Γ (QPSK unaffordable at
/// probe power) stay empty. Power scales are set to the exact requirement and
/// renormalized to sum to the used subcarrier count. Throws RateInfeasible
/// when target_bits exceeds the loadable maximum.
Loading bit_load(const SnrProfile& snr, int target_bits, double gap);

/// Rate-adaptive variant: the same greedy order, stopping when the next grant
/// would exceed the power budget (one unit per used subcarrier).
Loading bit_load_max_rate(const SnrProfile& snr, double gap);

/// Bits per frame for a raw line rate, rounded up to an even count.
int rate_to_bits(double rate_bps, const DmtConfig& cfg);

/// Raw line rate of a loading: bits/frame * dac_rate / (fft_size + cp_len).
double raw_rate(int bits_per_frame, const DmtConfig& cfg);

struct ProbeResult {
  SnrProfile snr;
  Loading loading;
  double gap = 0.0;
  int target_bits = 0;
};

/// Uniform-QPSK probe through `channel`, SNR estimate, then bit_load for
/// `rate_bps` at the gap of `target_ber`. probe_frames >= 100.
ProbeResult probe_and_load(const OpticalChannel& channel, const DmtConfig& cfg, double rate_bps,
                           double target_ber, std::size_t probe_frames, std::uint64_t seed);

/// The probe alone.
SnrProfile probe_snr(const OpticalChannel& channel, const DmtConfig& cfg, std::size_t probe_frames,
                     std::uint64_t seed);

}  // namespace dwdm80::dmt
