#include "dwdm80/pam4/pam4.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dwdm80/channel/detect.hpp"
#include "dwdm80/common/error.hpp"
#include "dwdm80/signal/fft.hpp"

namespace dwdm80::pam4 {

std::array<double, 4> PamScheme::field_levels() const {
  if (spacing == LevelSpacing::equidistant_field) return {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
  return {0.0, std::sqrt(1.0 / 3.0), std::sqrt(2.0 / 3.0), 1.0};
}

std::array<double, 4> PamScheme::intensity_levels() const {
  const auto a = field_levels();
  std::array<double, 4> p{};
  double mean = 0.0;
  for (int i = 0; i < 4; ++i) {
    p[i] = a[i] * a[i];
    mean += 0.25 * p[i];
  }
  for (auto& v : p) v /= mean;
  return p;
}

int gray_level(std::uint8_t b0, std::uint8_t b1) {
  static constexpr int kTable[2][2] = {{0, 1}, {3, 2}};
  return kTable[b0 & 1U][b1 & 1U];
}

std::array<std::uint8_t, 2> gray_bits(int level) {
  switch (level) {
    case 0: return {0, 0};
    case 1: return {0, 1};
    case 2: return {1, 1};
    case 3: return {1, 0};
    default: throw std::invalid_argument("gray_bits: level must be 0..3");
  }
}

std::vector<int> pam4_symbols(const signal::BitStream& bits) {
  if (bits.size() % 2 != 0) throw std::invalid_argument("pam4_map: odd bit count");
  std::vector<int> out(bits.size() / 2);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = gray_level(bits.bits[2 * k], bits.bits[2 * k + 1]);
  }
  return out;
}

signal::BitStream pam4_demap(std::span<const int> levels) {
  signal::BitStream out;
  out.origin = "pam4-demap";
  out.bits.resize(2 * levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto b = gray_bits(levels[k]);
    out.bits[2 * k] = b[0];
    out.bits[2 * k + 1] = b[1];
  }
  return out;
}

RealVector pam4_map(const signal::BitStream& bits, const PamScheme& scheme, double amplitude) {
  const auto levels = scheme.field_levels();
  const auto symbols = pam4_symbols(bits);
  RealVector out(symbols.size());
  for (std::size_t k = 0; k < symbols.size(); ++k) out[k] = amplitude * levels[symbols[k]];
  return out;
}

signal::Waveform pam4_modulate(std::span<const double> field_symbols, double baud,
                               std::size_t samples_per_symbol,
                               const std::optional<signal::FilterSpec>& tx_filter) {
  if (samples_per_symbol < 2) throw std::invalid_argument("pam4_modulate: samples_per_symbol must be >= 2");
  if (!(baud > 0.0)) throw std::invalid_argument("pam4_modulate: baud must be > 0");
  if (field_symbols.empty()) throw std::invalid_argument("pam4_modulate: no symbols");
  const double fs = baud * static_cast<double>(samples_per_symbol);
  signal::RealSignal drive{RealVector(field_symbols.size() * samples_per_symbol), fs};
  for (std::size_t k = 0; k < field_symbols.size(); ++k) {
    std::fill_n(drive.samples.begin() + static_cast<std::ptrdiff_t>(k * samples_per_symbol),
                samples_per_symbol, field_symbols[k]);
  }
  if (tx_filter) drive = signal::apply_filter(drive, *tx_filter);

  signal::Waveform w{ComplexVector(drive.size()), fs, 0.0};
  double power = 0.0;
  for (std::size_t i = 0; i < drive.size(); ++i) {
    const double a = std::max(drive.samples[i], 0.0);
    w.samples[i] = {a, 0.0};
    power += a * a;
  }
  power /= static_cast<double>(drive.size());
  if (!(power > 0.0)) throw std::invalid_argument("pam4_modulate: all-zero drive");
  const double g = 1.0 / std::sqrt(power);
  for (auto& v : w.samples) v *= g;
  return w;
}

double gaussian_crossing(double m1, double s1, double m2, double s2) {
  const double equal_q = (m1 * s2 + m2 * s1) / (s1 + s2);
  if (!(s1 > 0.0) || !(s2 > 0.0)) return 0.5 * (m1 + m2);
  if (std::abs(s1 - s2) <= 1e-12 * std::max(s1, s2)) return 0.5 * (m1 + m2);
  const double a = 1.0 / (s1 * s1) - 1.0 / (s2 * s2);
  const double b = -2.0 * (m1 / (s1 * s1) - m2 / (s2 * s2));
  const double c = m1 * m1 / (s1 * s1) - m2 * m2 / (s2 * s2) + 2.0 * std::log(s1 / s2);
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return equal_q;
  const double r = std::sqrt(disc);
  for (double x : {(-b - r) / (2.0 * a), (-b + r) / (2.0 * a)}) {
    if (x >= m1 && x <= m2) return x;
  }
  return equal_q;
}

namespace {

// Threshold in [lo, hi] minimizing (#a above t) + (#b below t); among equal
// minima the gap closest to `prefer` wins.
double min_error_threshold(RealVector a, RealVector b, double lo, double hi, double prefer) {
  std::vector<std::pair<double, int>> pts;
  pts.reserve(a.size() + b.size());
  for (double v : a) pts.emplace_back(v, 0);
  for (double v : b) pts.emplace_back(v, 1);
  std::sort(pts.begin(), pts.end());
  long errors = static_cast<long>(a.size());
  long best = std::numeric_limits<long>::max();
  double best_t = prefer;
  double best_dist = std::numeric_limits<double>::infinity();
  auto consider = [&](double left, double right) {
    const double l = std::max(left, lo);
    const double r = std::min(right, hi);
    if (l > r) return;
    const double t = 0.5 * (l + r);
    const double dist = std::abs(t - prefer);
    if (errors < best || (errors == best && dist < best_dist)) {
      best = errors;
      best_t = t;
      best_dist = dist;
    }
  };
  double left = lo;
  for (const auto& [v, cls] : pts) {
    consider(left, v);
    errors += (cls == 0) ? -1 : 1;
    left = v;
  }
  consider(left, hi);
  return best_t;
}

}  // namespace

std::array<double, 3> decision_thresholds(std::span<const double> samples,
                                          std::span<const int> levels, ThresholdMode mode,
                                          std::array<double, 4>* means_out,
                                          std::array<double, 4>* sigmas_out) {
  if (samples.size() != levels.size()) throw std::invalid_argument("thresholds: size mismatch");
  std::array<RealVector, 4> cls;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const int l = levels[k];
    if (l < 0 || l > 3) throw std::invalid_argument("thresholds: level out of range");
    cls[l].push_back(samples[k]);
  }
  std::array<double, 4> means{};
  std::array<double, 4> sigmas{};
  for (int i = 0; i < 4; ++i) {
    if (cls[i].size() < 2) throw std::invalid_argument("thresholds: a level is missing from training");
    const double n = static_cast<double>(cls[i].size());
    const double m = std::accumulate(cls[i].begin(), cls[i].end(), 0.0) / n;
    double v = 0.0;
    for (double x : cls[i]) v += (x - m) * (x - m);
    means[i] = m;
    sigmas[i] = std::sqrt(v / (n - 1.0));
  }
  std::array<double, 3> t{};
  for (int i = 0; i < 3; ++i) {
    const double mid = 0.5 * (means[i] + means[i + 1]);
    switch (mode) {
      case ThresholdMode::midpoint:
        t[i] = mid;
        break;
      case ThresholdMode::gaussian_ml:
        t[i] = gaussian_crossing(means[i], sigmas[i], means[i + 1], sigmas[i + 1]);
        break;
      case ThresholdMode::min_error: {
        const double g = gaussian_crossing(means[i], sigmas[i], means[i + 1], sigmas[i + 1]);
        t[i] = min_error_threshold(cls[i], cls[i + 1], std::min(means[i], means[i + 1]),
                                   std::max(means[i], means[i + 1]), g);
        break;
      }
    }
  }
  if (means_out) *means_out = means;
  if (sigmas_out) *sigmas_out = sigmas;
  return t;
}

namespace {

struct Candidate {
  std::size_t offset = 0;
  double mse = std::numeric_limits<double>::infinity();
  RealVector taps;
  double x_mean = 0.0;
};

RealVector sample_phase(const RealVector& y, std::size_t offset, std::size_t sps, std::size_t n_sym) {
  RealVector x(n_sym);
  for (std::size_t k = 0; k < n_sym; ++k) x[k] = y[(offset + k * sps) % y.size()];
  return x;
}

}  // namespace

Pam4RxResult pam4_receive(const signal::RealSignal& detected, std::span<const int> known_levels,
                          const Pam4RxConfig& cfg) {
  signal::RealSignal y = cfg.rx_filter ? signal::apply_filter(detected, *cfg.rx_filter) : detected;
  const double ratio = y.sample_rate / cfg.baud;
  const auto sps = static_cast<std::size_t>(std::llround(ratio));
  if (sps < 1 || std::abs(ratio - static_cast<double>(sps)) > 1e-9) {
    throw std::invalid_argument("pam4_receive: sample rate is not an integer multiple of baud");
  }
  const std::size_t n_sym = y.size() / sps;
  if (n_sym != known_levels.size() || y.size() % sps != 0) {
    throw std::invalid_argument("pam4_receive: record length does not match known symbols");
  }
  const std::size_t n_train = cfg.training_symbols;
  if (n_train < 8 || n_train > n_sym) throw std::invalid_argument("pam4_receive: bad training length");
  FfeConfig ffe_cfg;
  if (cfg.ffe) {
    ffe_cfg = *cfg.ffe;
    ffe_cfg.training_length = std::min(ffe_cfg.training_length, n_train);
    validate(ffe_cfg);
  }

  const auto ideal = cfg.scheme.intensity_levels();
  RealVector target(n_sym);
  for (std::size_t k = 0; k < n_sym; ++k) target[k] = ideal[known_levels[k]];
  double target_mean = 0.0;
  for (std::size_t k = 0; k < n_train; ++k) target_mean += target[k];
  target_mean /= static_cast<double>(n_train);

  // Coarse timing: correlate the detected record with the NRZ training template.
  const std::size_t n = y.size();
  double y_mean = std::accumulate(y.samples.begin(), y.samples.end(), 0.0) / static_cast<double>(n);
  ComplexVector yc(n);
  ComplexVector ref(n, Complex(0.0));
  for (std::size_t i = 0; i < n; ++i) yc[i] = y.samples[i] - y_mean;
  double ref_energy = 0.0;
  for (std::size_t k = 0; k < n_train; ++k) {
    const double v = target[k] - target_mean;
    for (std::size_t j = 0; j < sps; ++j) ref[k * sps + j] = v;
    ref_energy += v * v * static_cast<double>(sps);
  }
  const ComplexVector xc = signal::circular_xcorr(yc, ref);
  std::size_t peak = 0;
  for (std::size_t m = 1; m < n; ++m) {
    if (xc[m].real() > xc[peak].real()) peak = m;
  }
  double seg_energy = 0.0;
  for (std::size_t i = 0; i < n_train * sps; ++i) seg_energy += std::norm(yc[(peak + i) % n]);
  const double sync_peak = (seg_energy > 0.0 && ref_energy > 0.0)
                               ? xc[peak].real() / std::sqrt(seg_energy * ref_energy)
                               : 0.0;
  if (!(sync_peak >= cfg.sync_floor)) throw SyncFailed(sync_peak, cfg.sync_floor);

  // Sampling phase: lowest training MSE within one symbol after the peak.
  Candidate best;
  for (std::size_t phi = 0; phi < sps; ++phi) {
    Candidate c;
    c.offset = (peak + phi) % n;
    RealVector x = sample_phase(y.samples, c.offset, sps, n_sym);
    for (std::size_t k = 0; k < n_train; ++k) c.x_mean += x[k];
    c.x_mean /= static_cast<double>(n_train);
    if (cfg.ffe) {
      for (auto& v : x) v -= c.x_mean;
      RealVector d(n_train);
      for (std::size_t k = 0; k < n_train; ++k) d[k] = target[k] - target_mean;
      try {
        c.taps = train_ffe(x, d, ffe_cfg);
      } catch (const SingularRegression&) {
        continue;
      }
      const RealVector z = apply_ffe(std::span<const double>(x), c.taps);
      double acc = 0.0;
      for (std::size_t k = 0; k < n_train; ++k) acc += (z[k] - d[k]) * (z[k] - d[k]);
      c.mse = acc / static_cast<double>(n_train);
    } else {
      // Affine fit of raw samples onto the ideal levels.
      double sxx = 0.0, sxy = 0.0;
      for (std::size_t k = 0; k < n_train; ++k) {
        const double dx = x[k] - c.x_mean;
        sxx += dx * dx;
        sxy += dx * (target[k] - target_mean);
      }
      const double gain = sxx > 0.0 ? sxy / sxx : 0.0;
      double acc = 0.0;
      for (std::size_t k = 0; k < n_train; ++k) {
        const double e = gain * (x[k] - c.x_mean) + target_mean - target[k];
        acc += e * e;
      }
      c.mse = acc / static_cast<double>(n_train);
    }
    if (c.mse < best.mse) best = std::move(c);
  }
  if (!std::isfinite(best.mse)) throw SingularRegression("pam4_receive: no trainable sampling phase");

  RealVector z = sample_phase(y.samples, best.offset, sps, n_sym);
  if (cfg.ffe) {
    for (auto& v : z) v -= best.x_mean;
    z = apply_ffe(std::span<const double>(z), best.taps);
    for (auto& v : z) v += target_mean;
  }

  Pam4RxResult out;
  auto& diag = out.diagnostics;
  diag.thresholds = decision_thresholds(std::span<const double>(z.data(), n_train),
                                        known_levels.first(n_train), cfg.thresholds,
                                        &diag.level_means, &diag.level_sigmas);
  std::sort(diag.thresholds.begin(), diag.thresholds.end());
  diag.mse = best.mse;
  diag.taps = best.taps;
  diag.sample_offset = best.offset;
  diag.sync_peak = sync_peak;

  out.levels.resize(n_sym);
  for (std::size_t k = 0; k < n_sym; ++k) {
    int l = 0;
    while (l < 3 && z[k] > diag.thresholds[l]) ++l;
    out.levels[k] = l;
  }
  out.bits = pam4_demap(out.levels);
  return out;
}

Pam4RxResult pam4_receive(const channel::ReceivedField& field, std::span<const int> known_levels,
                          const Pam4RxConfig& cfg) {
  return pam4_receive(channel::photodetect(field), known_levels, cfg);
}

}  // namespace dwdm80::pam4
