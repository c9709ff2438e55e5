#include <doctest.h>

#include <cmath>
#include <random>

#include "dwdm80/channel/noise.hpp"
#include "dwdm80/common/error.hpp"
#include "dwdm80/dmt/loading.hpp"
#include "dwdm80/dmt/modem.hpp"
#include "dwdm80/dmt/qam.hpp"
#include "dwdm80/metrics/ber.hpp"
#include "dwdm80/signal/prbs.hpp"

using namespace dwdm80;
using namespace dwdm80::dmt;

namespace {

dmt::OpticalChannel ideal() {
  return [](const signal::Waveform& w, std::uint64_t) { return channel::ReceivedField{w, std::nullopt}; };
}

// Tables cycling through every QAM order, unit power.
LoadingTable mixed_table(std::size_t used) {
  LoadingTable t;
  for (std::size_t i = 0; i < used; ++i) {
    const int b = static_cast<int>(2 * (i % 5));
    t.bits.push_back(b);
    t.power.push_back(b == 0 ? 0.0 : 0.5 + 0.1 * static_cast<double>(i % 7));
  }
  return t;
}

std::vector<ComplexVector> qpsk_streams(std::size_t used, std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution b;
  const double a = std::sqrt(0.5);
  std::vector<ComplexVector> s(used, ComplexVector(n));
  for (auto& v : s)
    for (auto& z : v) z = {b(rng) ? a : -a, b(rng) ? a : -a};
  return s;
}

}  // namespace

TEST_CASE("qam constellations") {
  for (int bits : {2, 4, 6, 8}) {
    CAPTURE(bits);
    const int m = 1 << bits;
    double energy = 0.0;
    std::uint8_t in[8], out[8];
    for (int v = 0; v < m; ++v) {
      for (int j = 0; j < bits; ++j) in[j] = static_cast<std::uint8_t>((v >> j) & 1);
      const Complex z = qam_map(in, bits);
      energy += std::norm(z);
      qam_demap(z, bits, out);
      CHECK(std::equal(in, in + bits, out));
      CHECK(std::abs(qam_decide(z + Complex(0.01, -0.01), bits) - z) < 1e-12);
    }
    CHECK(energy / m == doctest::Approx(1.0));
  }
  // Gray per axis: neighbouring in-phase levels differ by one bit.
  std::uint8_t a[4] = {0, 0, 0, 0}, b[4] = {0, 1, 0, 0};
  CHECK(std::abs(qam_map(a, 4).real() - qam_map(b, 4).real()) == doctest::Approx(2.0 / std::sqrt(10.0)));
  CHECK_FALSE(valid_qam_bits(3));
  CHECK_THROWS_AS(qam_map(a, 3), std::invalid_argument);
}

TEST_CASE("frame timing and line rate") {
  const DmtConfig cfg;
  CHECK(cfg.used_count() == 255);
  CHECK(raw_rate(LoadingTable::uniform(255, 2).total_bits(), cfg) == doctest::Approx(108.18e9).epsilon(1e-4));
  CHECK(rate_to_bits(112e9, cfg) == 528);
  CHECK(rate_to_bits(56e9, cfg) == 264);
  CHECK(cfg.subcarrier_spacing() == doctest::Approx(0.21875e9));
}

TEST_CASE("frames are Hermitian") {
  const DmtConfig cfg;
  const auto table = LoadingTable::uniform(cfg.used_count(), 4);
  const auto bits = signal::random_bits(1, static_cast<std::size_t>(table.total_bits()));
  const auto frames = map_frames(bits, table, cfg);
  REQUIRE(frames.size() == 1);
  const ComplexVector t = frame_time_samples(frames[0], cfg);
  CHECK(t.size() == cfg.fft_size);
  double imag = 0.0, real = 0.0;
  for (const auto& z : t) {
    imag = std::max(imag, std::abs(z.imag()));
    real = std::max(real, std::abs(z.real()));
  }
  CHECK(imag < 1e-12 * real);
}

TEST_CASE("modulator contracts") {
  const DmtConfig cfg;
  LoadingTable empty;
  empty.bits.assign(cfg.used_count(), 0);
  empty.power.assign(cfg.used_count(), 0.0);
  const auto w = dmt_modulate(signal::BitStream{}, empty, cfg);
  for (const auto& s : w.samples) CHECK(std::abs(s - w.samples.front()) < 1e-12);
  CHECK(signal::mean_power(w) == doctest::Approx(1.0));

  const auto qpsk = LoadingTable::uniform(cfg.used_count(), 2);
  const auto wq = dmt_modulate(signal::random_bits(2, 510 * 4), qpsk, cfg);
  CHECK(wq.sample_rate == 224e9);
  CHECK(wq.size() == 4 * cfg.frame_length() * 2);
  CHECK(signal::mean_power(wq) == doctest::Approx(1.0));
  for (const auto& s : wq.samples) CHECK(s.real() >= 0.0);

  CHECK_THROWS_AS(dmt_modulate(signal::random_bits(2, 511), qpsk, cfg), std::invalid_argument);
  CHECK_THROWS_AS(dmt_modulate(signal::random_bits(2, 510), LoadingTable::uniform(100, 2), cfg),
                  std::invalid_argument);
  LoadingTable bad = qpsk;
  bad.power[3] = 0.0;
  CHECK_THROWS_AS(validate(bad, cfg), std::invalid_argument);
}

TEST_CASE("noiseless loopback is error free") {
  DmtConfig cfg;
  const auto table = mixed_table(cfg.used_count());
  const auto run = run_dmt_link(table, cfg, 40, ideal(), 3);
  CHECK(run.tx_bits.size() == 40u * static_cast<std::size_t>(table.total_bits()));
  CHECK(metrics::count_ber(run.tx_bits, run.rx_bits).errors == 0);

  // Time-domain demodulation of an aligned record.
  const auto full = LoadingTable::uniform(cfg.used_count(), 6);
  const auto bits = signal::random_bits(4, 10u * static_cast<std::size_t>(full.total_bits()));
  const auto frames = map_frames(bits, full, cfg);
  const auto field = dmt_modulate(bits, full, cfg);
  const auto y = dmt_detect(channel::ReceivedField{field, std::nullopt}, cfg);
  const auto rx_frames = extract_frames(y, 0, 0, frames.size(), cfg);
  const auto h = estimate_channel(rx_frames, frames);
  const auto demod = dmt_demodulate(y, full, cfg, h, frames.size());
  CHECK(demod.bits.bits == bits.bits);
}

TEST_CASE("equalizer removes per-subcarrier phase rotations") {
  DmtConfig cfg;
  const std::size_t used = cfg.used_count();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ph(-kPi, kPi);
  ComplexVector rot(used);
  for (auto& r : rot) r = std::polar(0.3 + 0.7 * std::abs(ph(rng)) / kPi, ph(rng));

  const auto train_table = LoadingTable::uniform(used, 2);
  const auto train = map_frames(signal::random_bits(6, 8 * 510), train_table, cfg);
  const auto table = mixed_table(used);
  const auto bits = signal::random_bits(7, 20u * static_cast<std::size_t>(table.total_bits()));
  const auto payload = map_frames(bits, table, cfg);

  auto through = [&](std::vector<Frame> f) {
    for (auto& fr : f)
      for (std::size_t i = 0; i < used; ++i) fr[i] *= rot[i];
    return f;
  };
  const auto h = estimate_channel(through(train), train);
  for (std::size_t i = 0; i < used; ++i) CHECK(std::abs(h[i] - rot[i]) < 1e-12);
  CHECK(demodulate_frames(through(payload), table, h).bits.bits == bits.bits);

  // A record delayed by whole DAC samples; sync absorbs the delay.
  const dmt::OpticalChannel delay = [](const signal::Waveform& w, std::uint64_t) {
    signal::Waveform d = w;
    std::rotate(d.samples.begin(), d.samples.end() - 38, d.samples.end());
    return channel::ReceivedField{d, std::nullopt};
  };
  const auto run = run_dmt_link(table, cfg, 20, delay, 8);
  CHECK(metrics::count_ber(run.tx_bits, run.rx_bits).errors == 0);

  ComplexVector dead = h;
  dead[1] = 0.0;
  CHECK_THROWS_AS(demodulate_frames(payload, table, dead), DeadSubcarrier);
}

TEST_CASE("channel estimation with noise") {
  const std::size_t used = 64;
  const double sigma2 = 0.01;
  const Complex g(0.4, -0.9);
  auto estimate = [&](std::size_t frames, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, std::sqrt(sigma2 / 2));
    const auto tx_streams = qpsk_streams(used, frames, seed + 100);
    std::vector<Frame> tx(frames, Frame(used)), rx(frames, Frame(used));
    for (std::size_t f = 0; f < frames; ++f)
      for (std::size_t i = 0; i < used; ++i) {
        tx[f][i] = tx_streams[i][f];
        rx[f][i] = (i == 5 ? g : Complex(1.0)) * tx[f][i] + Complex(n(rng), n(rng));
      }
    return estimate_channel(rx, tx);
  };

  const auto h = estimate(32, 1);
  const double sd = std::sqrt(sigma2 / 32);
  CHECK(std::abs(h[5] - g) < 3.0 * sd);
  CHECK(std::abs(h[0] - 1.0) < 3.0 * sd);

  auto spread = [&](std::size_t frames) {
    double v = 0.0;
    const auto e = estimate(frames, 7);
    for (std::size_t i = 0; i < used; ++i)
      if (i != 5) v += std::norm(e[i] - 1.0);
    return v / (used - 1);
  };
  const double v8 = spread(8), v32 = spread(32);
  CHECK(v8 == doctest::Approx(sigma2 / 8).epsilon(0.3));
  CHECK(v8 / v32 == doctest::Approx(4.0).epsilon(0.35));

  std::vector<Frame> zero(1, Frame(used, 0.0));
  CHECK_THROWS_AS(estimate_channel(zero, zero), std::invalid_argument);
}

TEST_CASE("error-vector SNR estimate") {
  DmtConfig cfg;
  cfg.first_subcarrier = 1;
  cfg.last_subcarrier = 16;
  const auto tx = qpsk_streams(16, 4000, 9);
  const SnrProfile exact = estimate_snr(tx, tx, cfg);
  for (double s : exact.snr) CHECK(10.0 * std::log10(s) == doctest::Approx(kSnrCapDb));

  std::mt19937_64 rng(10);
  std::normal_distribution<double> n(0.0, std::sqrt(0.05));
  auto rx = tx;
  for (auto& v : rx)
    for (auto& z : v) z += Complex(n(rng), n(rng));
  const SnrProfile p = estimate_snr(rx, tx, cfg);
  for (double s : p.snr) CHECK(std::abs(10.0 * std::log10(s) - 10.0) < 0.5);
  CHECK(p.frequency[0] == doctest::Approx(cfg.subcarrier_spacing()));

  const auto few = qpsk_streams(16, 99, 11);
  CHECK_THROWS_AS(estimate_snr(few, few, cfg), std::invalid_argument);
}

TEST_CASE("synchronization failure is reported") {
  DmtConfig cfg;
  cfg.sync_floor = 0.9;
  const dmt::OpticalChannel scramble = [](const signal::Waveform& w, std::uint64_t seed) {
    return channel::add_ase_noise(w, -10.0, false, seed);
  };
  CHECK_THROWS_AS(run_dmt_link(LoadingTable::uniform(cfg.used_count(), 2), cfg, 4, scramble, 1), SyncFailed);
}
