#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "dwdm80/channel/fiber.hpp"
#include "dwdm80/channel/wdm.hpp"
#include "dwdm80/dmt/loading.hpp"
#include "dwdm80/metrics/ber.hpp"
#include "dwdm80/pam4/pam4.hpp"

namespace dwdm80::experiment {

// End-to-end transmitters, links and receivers as BER-returning functions.
// Every call is pure given its seed.

struct Pam4Link {
  pam4::PamScheme scheme;
  double baud = 56e9;
  std::size_t samples_per_symbol = 4;
  std::optional<signal::FilterSpec> tx_filter;
  std::optional<signal::FilterSpec> rx_filter;
  std::optional<pam4::FfeConfig> ffe;
  pam4::ThresholdMode thresholds = pam4::ThresholdMode::min_error;
  bool optical_matched_filter = false;  // integrate-and-dump before the photodiode
  std::size_t training_symbols = 2000;
};

void validate(const Pam4Link& cfg);

/// One PAM4 record: training_symbols known symbols followed by payload_bits
/// random bits, through `link`, counted on the payload only.
metrics::BerResult pam4_trial(const Pam4Link& cfg, const channel::LinkSpec& link,
                              std::size_t payload_bits, std::uint64_t seed);

enum class DmtLoadingMode { uniform, adaptive };

struct DmtLink {
  dmt::DmtConfig modem;
  DmtLoadingMode loading = DmtLoadingMode::adaptive;
  int uniform_bits = 2;         // uniform mode
  double rate_bps = 112e9;      // adaptive mode, raw line rate
  double loading_ber = 4e-3;    // sets the loading gap
  std::size_t probe_frames = 128;
};

void validate(const DmtLink& cfg);

/// Builds the optical channel for one DMT record. The argument is the
/// loading table carried by co-propagating channels, if any.
using ChannelFactory = std::function<dmt::OpticalChannel(const dmt::LoadingTable&)>;

/// CD, carrier detuning against the link filters, ASE, optical filters.
ChannelFactory single_channel(const channel::LinkSpec& link, double detuning_hz = 0.0);

/// Channel `index` of a WDM plan: every other slot carries an independent
/// DMT signal with the same configuration and loading (or nothing when
/// neighbors_on is false). CD and ASE act on the composite; ASE is referred
/// to one channel's power.
ChannelFactory wdm_channel(const channel::LinkSpec& link, const channel::WdmPlan& plan, int index,
                           const dmt::DmtConfig& modem, bool neighbors_on, std::uint64_t seed);

struct DmtTrial {
  metrics::BerResult ber;
  dmt::SnrProfile snr;         // empty for uniform loading
  dmt::Loading loading;
  int bits_per_frame = 0;
};

/// Uniform mode: the table is fixed. Adaptive mode: probe, load for
/// rate_bps at the gap of loading_ber, then transmit the payload.
/// payload_bits is rounded up to whole frames.
DmtTrial dmt_trial(const DmtLink& cfg, const ChannelFactory& factory, std::size_t payload_bits,
                   std::uint64_t seed);

/// Probe only: achievable raw rate of the rate-adaptive loading at the gap
/// of loading_ber, with the probed SNR profile.
struct DmtCapacity {
  dmt::SnrProfile snr;
  dmt::Loading loading;
  double raw_rate = 0.0;
};
DmtCapacity dmt_capacity(const DmtLink& cfg, const ChannelFactory& factory, std::uint64_t seed);

}  // namespace dwdm80::experiment
