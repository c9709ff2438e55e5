#include "dwdm80/dmt/loading.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dwdm80/common/error.hpp"
#include "dwdm80/metrics/analytic.hpp"

namespace dwdm80::dmt {

double required_power(int bits, double snr, double gap) {
  if (bits == 0) return 0.0;
  return gap * (std::ldexp(1.0, bits) - 1.0) / snr;
}

namespace {

bool loadable(double snr, double gap) { return snr >= 3.0 * gap; }

void check_inputs(const SnrProfile& snr, double gap) {
  if (snr.snr.empty()) throw std::invalid_argument("bit_load: empty SNR profile");
  if (!(gap > 0.0)) throw std::invalid_argument("bit_load: gap must be > 0");
  for (double s : snr.snr) {
    if (!(s >= 0.0)) throw std::invalid_argument("bit_load: SNR must be >= 0");
  }
}

// Index of the cheapest +2 bit grant, or npos when none is left.
std::size_t cheapest(const SnrProfile& snr, const std::vector<int>& bits, double gap,
                     double* cost) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] >= kMaxBitsPerSubcarrier || !loadable(snr.snr[k], gap)) continue;
    const double c = gap * (std::ldexp(1.0, bits[k] + 2) - std::ldexp(1.0, bits[k])) / snr.snr[k];
    if (c < best_cost) {
      best_cost = c;
      best = k;
    }
  }
  *cost = best_cost;
  return best;
}

Loading finish(const SnrProfile& snr, std::vector<int> bits, double gap) {
  Loading out;
  const auto used = static_cast<double>(bits.size());
  RealVector power(bits.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    power[k] = required_power(bits[k], snr.snr[k], gap);
    total += power[k];
  }
  if (total > 0.0) {
    for (auto& p : power) p *= used / total;
    out.margin_db = 10.0 * std::log10(used / total);
  } else {
    out.margin_db = std::numeric_limits<double>::infinity();
  }
  out.table.bits = std::move(bits);
  out.table.power = std::move(power);
  return out;
}

}  // namespace

Loading bit_load(const SnrProfile& snr, int target_bits, double gap) {
  check_inputs(snr, gap);
  if (target_bits < 0 || target_bits % 2 != 0) {
    throw std::invalid_argument("bit_load: target bits must be even and >= 0");
  }
  int max_bits = 0;
  for (double s : snr.snr) max_bits += loadable(s, gap) ? kMaxBitsPerSubcarrier : 0;
  if (target_bits > max_bits) throw RateInfeasible(target_bits, max_bits);

  std::vector<int> bits(snr.snr.size(), 0);
  for (int placed = 0; placed < target_bits; placed += 2) {
    double cost = 0.0;
    bits[cheapest(snr, bits, gap, &cost)] += 2;
  }
  return finish(snr, std::move(bits), gap);
}

Loading bit_load_max_rate(const SnrProfile& snr, double gap) {
  check_inputs(snr, gap);
  std::vector<int> bits(snr.snr.size(), 0);
  const auto budget = static_cast<double>(bits.size());
  double spent = 0.0;
  for (;;) {
    double cost = 0.0;
    const std::size_t k = cheapest(snr, bits, gap, &cost);
    if (k == std::numeric_limits<std::size_t>::max() || spent + cost > budget) break;
    bits[k] += 2;
    spent += cost;
  }
  return finish(snr, std::move(bits), gap);
}

int rate_to_bits(double rate_bps, const DmtConfig& cfg) {
  if (!(rate_bps > 0.0)) throw std::invalid_argument("rate_to_bits: rate must be > 0");
  const double exact = rate_bps * static_cast<double>(cfg.frame_length()) / cfg.dac_rate;
  auto bits = static_cast<int>(std::ceil(exact - 1e-9));
  if (bits % 2 != 0) ++bits;
  return bits;
}

double raw_rate(int bits_per_frame, const DmtConfig& cfg) {
  return static_cast<double>(bits_per_frame) * cfg.frame_rate();
}

SnrProfile probe_snr(const OpticalChannel& channel, const DmtConfig& cfg, std::size_t probe_frames,
                     std::uint64_t seed) {
  if (probe_frames < 100) throw std::invalid_argument("probe: need >= 100 probe frames");
  const LoadingTable probe = LoadingTable::uniform(cfg.used_count(), 2);
  const DmtRun run = run_dmt_link(probe, cfg, probe_frames, channel, seed);
  return estimate_snr(run.rx_symbols, run.tx_symbols, cfg);
}

ProbeResult probe_and_load(const OpticalChannel& channel, const DmtConfig& cfg, double rate_bps,
                           double target_ber, std::size_t probe_frames, std::uint64_t seed) {
  ProbeResult out;
  out.snr = probe_snr(channel, cfg, probe_frames, seed);
  out.gap = metrics::gap_from_ber(target_ber);
  out.target_bits = rate_to_bits(rate_bps, cfg);
  out.loading = bit_load(out.snr, out.target_bits, out.gap);
  return out;
}

}  // namespace dwdm80::dmt
