#include "dwdm80/experiment/links.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "dwdm80/channel/detect.hpp"
#include "dwdm80/channel/noise.hpp"
#include "dwdm80/common/seed.hpp"
#include "dwdm80/metrics/analytic.hpp"

namespace dwdm80::experiment {

void validate(const Pam4Link& cfg) {
  if (!(cfg.baud > 0.0)) throw std::invalid_argument("pam4.baud must be > 0");
  if (cfg.samples_per_symbol < 2) throw std::invalid_argument("pam4.samples_per_symbol must be >= 2");
  if (cfg.training_symbols < 100) throw std::invalid_argument("pam4.training_symbols must be >= 100");
  if (cfg.tx_filter) signal::validate(*cfg.tx_filter);
  if (cfg.rx_filter) signal::validate(*cfg.rx_filter);
  if (cfg.ffe) {
    pam4::validate(*cfg.ffe);
    if (cfg.ffe->training_length > cfg.training_symbols) {
      throw std::invalid_argument("pam4.ffe.training_length exceeds pam4.training_symbols");
    }
  }
  if (cfg.optical_matched_filter && cfg.rx_filter) {
    throw std::invalid_argument("pam4: optical matched filter and rx_filter are exclusive");
  }
}

metrics::BerResult pam4_trial(const Pam4Link& cfg, const channel::LinkSpec& link,
                              std::size_t payload_bits, std::uint64_t seed) {
  validate(cfg);
  if (payload_bits == 0 || payload_bits % 2 != 0) {
    throw std::invalid_argument("pam4_trial: payload bits must be even and > 0");
  }
  const std::size_t training_bits = 2 * cfg.training_symbols;
  const signal::BitStream bits = signal::random_bits(derive_seed(seed, 0), training_bits + payload_bits);
  const std::vector<int> levels = pam4::pam4_symbols(bits);
  const RealVector field = pam4::pam4_map(bits, cfg.scheme);
  const signal::Waveform tx = pam4::pam4_modulate(field, cfg.baud, cfg.samples_per_symbol, cfg.tx_filter);

  channel::ReceivedField rx = channel::propagate(tx, link, derive_seed(seed, 1));
  if (cfg.optical_matched_filter) rx = channel::optical_matched_filter(rx, cfg.samples_per_symbol);

  pam4::Pam4RxConfig rc;
  rc.scheme = cfg.scheme;
  rc.baud = cfg.baud;
  rc.rx_filter = cfg.rx_filter;
  rc.ffe = cfg.ffe;
  rc.thresholds = cfg.thresholds;
  rc.training_symbols = cfg.training_symbols;
  const pam4::Pam4RxResult res = pam4::pam4_receive(rx, levels, rc);

  std::uint64_t errors = 0;
  for (std::size_t i = training_bits; i < bits.size(); ++i) errors += bits.bits[i] != res.bits.bits[i];
  return metrics::make_ber(errors, payload_bits);
}

void validate(const DmtLink& cfg) {
  dmt::validate(cfg.modem);
  if (cfg.loading == DmtLoadingMode::uniform) {
    if (cfg.uniform_bits != 2 && cfg.uniform_bits != 4 && cfg.uniform_bits != 6 && cfg.uniform_bits != 8) {
      throw std::invalid_argument("dmt.uniform_bits must be 2, 4, 6 or 8");
    }
  } else {
    if (!(cfg.rate_bps > 0.0)) throw std::invalid_argument("dmt.rate_gbps must be > 0");
    if (!(cfg.loading_ber > 0.0 && cfg.loading_ber < 0.1)) {
      throw std::invalid_argument("dmt.loading_ber must lie in (0, 0.1)");
    }
    if (cfg.probe_frames < 100) throw std::invalid_argument("dmt.probe_frames must be >= 100");
  }
}

ChannelFactory single_channel(const channel::LinkSpec& link, double detuning_hz) {
  channel::validate(link);
  return [link, detuning_hz](const dmt::LoadingTable&) -> dmt::OpticalChannel {
    return [link, detuning_hz](const signal::Waveform& w, std::uint64_t seed) {
      signal::Waveform x = channel::apply_cd(w, link.length_km, link.dispersion_ps_nm_km, link.wavelength_nm);
      if (detuning_hz != 0.0) {
        x = signal::frequency_shift(x, signal::snap_to_bin(detuning_hz, x.size(), x.sample_rate));
      }
      channel::LinkSpec rest = link;
      rest.length_km = 0.0;
      return channel::propagate(x, rest, seed);
    };
  };
}

ChannelFactory wdm_channel(const channel::LinkSpec& link, const channel::WdmPlan& plan, int index,
                           const dmt::DmtConfig& modem, bool neighbors_on, std::uint64_t seed) {
  channel::validate(link);
  channel::validate(plan);
  dmt::validate(modem);
  if (index < 0 || index >= plan.channel_count) throw std::invalid_argument("wdm channel index out of range");
  return [=](const dmt::LoadingTable& table) -> dmt::OpticalChannel {
    return [=](const signal::Waveform& w, std::uint64_t trial_seed) {
      const std::size_t frames = w.size() / (modem.frame_length() * modem.oversampling);
      std::vector<signal::Waveform> chans;
      chans.reserve(static_cast<std::size_t>(plan.channel_count));
      for (int i = 0; i < plan.channel_count; ++i) {
        if (i == index) {
          chans.push_back(w);
        } else if (neighbors_on && table.total_bits() > 0) {
          const auto n_bits = frames * static_cast<std::size_t>(table.total_bits());
          const auto data = signal::random_bits(
              derive_seed(derive_seed(seed, trial_seed), static_cast<std::uint64_t>(i)), n_bits);
          chans.push_back(dmt::dmt_modulate(data, table, modem));
        } else {
          chans.push_back(signal::Waveform{ComplexVector(w.size()), w.sample_rate, 0.0});
        }
      }
      signal::Waveform composite = channel::wdm_mux(chans, plan);
      composite = channel::apply_cd(composite, link.length_km, link.dispersion_ps_nm_km, link.wavelength_nm);
      // Every channel leaves its transmitter at 1 mW; OSNR is per channel.
      channel::ReceivedField rf =
          channel::add_ase_noise(composite, link.osnr_db, link.orthogonal_pol_noise, trial_seed, 1.0);
      rf.signal = channel::wdm_demux(rf.signal, plan, index);
      if (rf.orthogonal) rf.orthogonal = channel::wdm_demux(*rf.orthogonal, plan, index);
      for (const auto& f : link.optical_filters) rf = channel::filter_field(rf, f);
      return rf;
    };
  };
}

DmtTrial dmt_trial(const DmtLink& cfg, const ChannelFactory& factory, std::size_t payload_bits,
                   std::uint64_t seed) {
  validate(cfg);
  DmtTrial out;
  const std::size_t used = cfg.modem.used_count();
  if (cfg.loading == DmtLoadingMode::uniform) {
    out.loading.table = dmt::LoadingTable::uniform(used, cfg.uniform_bits);
  } else {
    const dmt::LoadingTable probe = dmt::LoadingTable::uniform(used, 2);
    out.snr = dmt::probe_snr(factory(probe), cfg.modem, cfg.probe_frames, derive_seed(seed, 0));
    const int target = dmt::rate_to_bits(cfg.rate_bps, cfg.modem);
    out.loading = dmt::bit_load(out.snr, target, metrics::gap_from_ber(cfg.loading_ber));
  }
  out.bits_per_frame = out.loading.table.total_bits();
  const auto per_frame = static_cast<std::size_t>(out.bits_per_frame);
  const std::size_t frames = (payload_bits + per_frame - 1) / per_frame;
  const dmt::DmtRun run =
      dmt::run_dmt_link(out.loading.table, cfg.modem, frames, factory(out.loading.table), derive_seed(seed, 1));
  out.ber = metrics::count_ber(run.tx_bits, run.rx_bits);
  return out;
}

DmtCapacity dmt_capacity(const DmtLink& cfg, const ChannelFactory& factory, std::uint64_t seed) {
  validate(cfg);
  DmtCapacity out;
  const dmt::LoadingTable probe = dmt::LoadingTable::uniform(cfg.modem.used_count(), 2);
  out.snr = dmt::probe_snr(factory(probe), cfg.modem, cfg.probe_frames, derive_seed(seed, 0));
  out.loading = dmt::bit_load_max_rate(out.snr, metrics::gap_from_ber(cfg.loading_ber));
  out.raw_rate = dmt::raw_rate(out.loading.table.total_bits(), cfg.modem);
  return out;
}

}  // namespace dwdm80::experiment
