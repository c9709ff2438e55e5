#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "dwdm80/signal/fft.hpp"
#include "dwdm80/signal/filter.hpp"
#include "dwdm80/signal/prbs.hpp"
#include "dwdm80/signal/waveform.hpp"

using namespace dwdm80;
using namespace dwdm80::signal;

namespace {

Waveform tone(double f, std::size_t n, double fs) {
  ComplexVector s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = std::polar(1.0, 2.0 * kPi * f * k / fs);
  return make_waveform(std::move(s), fs);
}

Waveform white_noise(std::size_t n, double fs, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  ComplexVector s(n);
  for (auto& z : s) z = {g(rng), g(rng)};
  return make_waveform(std::move(s), fs);
}

double peak_frequency(const Waveform& w) {
  const Spectrum sp = power_spectrum(w);
  const auto it = std::max_element(sp.power.begin(), sp.power.end());
  return sp.frequency[static_cast<std::size_t>(it - sp.power.begin())];
}

// Independent shift-register walk for x^7 + x^6 + 1: the output is the
// feedback bit (taps 7 and 6), which is shifted into position 1.
std::vector<std::uint8_t> prbs7_walk(std::size_t n) {
  std::array<std::uint8_t, 7> r{1, 1, 1, 1, 1, 1, 1};
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t fb = r[6] ^ r[5];
    for (int j = 6; j > 0; --j) r[j] = r[j - 1];
    r[0] = fb;
    out.push_back(fb);
  }
  return out;
}

}  // namespace

TEST_CASE("prbs7 from all-ones") {
  const auto seed = prbs_all_ones(7);
  CHECK(prbs_generate(7, seed, 0).size() == 0);

  const auto first8 = prbs_generate(7, seed, 8);
  CHECK(first8.bits == prbs7_walk(8));
  CHECK(first8.bits == std::vector<std::uint8_t>{0, 0, 0, 0, 0, 0, 1, 0});

  const auto two = prbs_generate(7, seed, 254);
  CHECK(std::equal(two.bits.begin(), two.bits.begin() + 127, two.bits.begin() + 127));
  CHECK(std::count(two.bits.begin(), two.bits.begin() + 127, 1) == 64);
  CHECK(two.bits == prbs7_walk(254));
}

TEST_CASE("prbs periods and errors") {
  const auto p15 = prbs_generate(15, prbs_all_ones(15), 2 * 32767);
  CHECK(std::equal(p15.bits.begin(), p15.bits.begin() + 32767, p15.bits.begin() + 32767));
  CHECK(std::count(p15.bits.begin(), p15.bits.begin() + 32767, 1) == 16384);
  CHECK_THROWS_AS(prbs_generate(7, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(prbs_generate(9, 1, 10), std::invalid_argument);
}

TEST_CASE("random bits are reproducible and balanced") {
  const auto a = random_bits(5, 100000);
  const auto b = random_bits(5, 100000);
  CHECK(a.bits == b.bits);
  CHECK(a.bits != random_bits(6, 100000).bits);
  const auto ones = std::count(a.bits.begin(), a.bits.end(), 1);
  CHECK(std::abs(ones - 50000) < 800);
}

TEST_CASE("fft conventions") {
  const std::size_t n = 64;
  const Waveform w = tone(3.0, n, 64.0);
  const ComplexVector X = fft(w.samples);
  CHECK(std::abs(X[3] - Complex(64.0, 0.0)) < 1e-9);
  const ComplexVector back = ifft(X);
  for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(back[k] - w.samples[k]) < 1e-12);
  CHECK(bin_frequency(0, n, 64.0) == 0.0);
  CHECK(bin_frequency(32, n, 64.0) == -32.0);
  CHECK(bin_frequency(63, n, 64.0) == -1.0);

  ComplexVector a(n), b(n);
  for (std::size_t k = 0; k < n; ++k) a[k] = w.samples[(k + 5) % n];
  b = w.samples;
  const ComplexVector c = circular_xcorr(a, b);
  // a_{n+m} = b_{n+m+5}: correlates fully at m = n - 5.
  CHECK(std::abs(c[n - 5]) == doctest::Approx(64.0));
}

TEST_CASE("frequency_shift") {
  const double fs = 64e9;
  const std::size_t n = 4096;
  const Waveform w = white_noise(n, fs, 1);
  const Waveform same = frequency_shift(w, 0.0);
  CHECK(same.samples == w.samples);

  const Waveform round = frequency_shift(frequency_shift(w, 3.3e9), -3.3e9);
  for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(round.samples[k] - w.samples[k]) < 1e-12);

  const double f1 = snap_to_bin(1e9, n, fs);
  const double df = snap_to_bin(5e9, n, fs);
  const Waveform t = frequency_shift(tone(f1, n, fs), df);
  CHECK(peak_frequency(t) == doctest::Approx(f1 + df));
  CHECK(std::abs(f1 + df - 6e9) <= fs / n);
  CHECK(mean_power(t) == doctest::Approx(1.0));
}

TEST_CASE("mean_power") {
  CHECK(mean_power(make_waveform(ComplexVector(16, 0.0), 1.0)) == 0.0);
  CHECK(mean_power(make_waveform(ComplexVector(16, 1.0), 1.0)) == 1.0);
  CHECK(mean_power(white_noise(1u << 20, 1.0, 7)) == doctest::Approx(1.0).epsilon(0.005));
  CHECK_THROWS_AS(mean_power(Waveform{}), std::invalid_argument);
}

TEST_CASE("sum_waveforms") {
  const double fs = 128e9;
  const std::size_t n = 2048;
  const Waveform w = white_noise(n, fs, 3);
  CHECK(sum_waveforms(std::vector<Waveform>{w}).samples == w.samples);

  const Waveform z = sum_waveforms(std::vector<Waveform>{w, scale(w, -1.0)});
  for (const auto& s : z.samples) CHECK(std::abs(s) == 0.0);

  const double f = snap_to_bin(25e9, n, fs);
  const Waveform two = sum_waveforms(std::vector<Waveform>{tone(f, n, fs), tone(-f, n, fs)});
  const Spectrum sp = power_spectrum(two);
  CHECK(band_power(sp, f - 1e6, f + 1e6) == doctest::Approx(1.0));
  CHECK(band_power(sp, -f - 1e6, -f + 1e6) == doctest::Approx(1.0));

  const Waveform other = make_waveform(ComplexVector(n, 0.0), 2 * fs);
  CHECK_THROWS_AS(sum_waveforms(std::vector<Waveform>{w, other}), std::invalid_argument);
}

TEST_CASE("real resampling round trip") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  RealSignal r{RealVector(256), 1.0};
  // Band-limited to a quarter of the original band.
  ComplexVector X(256, 0.0);
  for (std::size_t k = 1; k < 32; ++k) {
    X[k] = {g(rng), g(rng)};
    X[256 - k] = std::conj(X[k]);
  }
  const ComplexVector x = ifft(X);
  for (std::size_t k = 0; k < 256; ++k) r.samples[k] = x[k].real();
  const RealSignal up = upsample(r, 4);
  CHECK(up.size() == 1024);
  CHECK(up.sample_rate == 4.0);
  for (std::size_t k = 0; k < 256; ++k) CHECK(up.samples[4 * k] == doctest::Approx(r.samples[k]).epsilon(1e-9));
  const RealSignal down = downsample(up, 4);
  for (std::size_t k = 0; k < 256; ++k) CHECK(down.samples[k] == doctest::Approx(r.samples[k]).epsilon(1e-9));
}

// Reverse Bessel polynomial of order 5 with its textbook coefficients.
Complex bessel5(Complex s) {
  const double c[] = {945, 945, 420, 105, 15, 1};
  Complex v = 0.0;
  for (int k = 5; k >= 0; --k) v = v * s + c[k];
  return v;
}

TEST_CASE("bessel lowpass against the order-5 polynomial") {
  const double fc = 18e9;
  const FilterSpec b = FilterSpec::bessel(fc, 5);

  // Cutoff of the unit-delay prototype by bisection on |H|^2 = 1/2.
  double lo = 0.5, hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::norm(945.0 / bessel5({0.0, mid})) > 0.5 ? lo : hi) = mid;
  }
  CHECK(bessel_prototype_cutoff(5) == doctest::Approx(lo).epsilon(1e-9));

  CHECK(std::abs(transfer(b, 0.0)) == doctest::Approx(1.0));
  CHECK(20.0 * std::log10(std::abs(transfer(b, fc))) == doctest::Approx(-3.0103).epsilon(0.05 / 3.0103));
  for (double f : {3e9, 10e9, 25e9, 40e9}) {
    const double w = lo * f / fc;
    CHECK(std::abs(transfer(b, f)) == doctest::Approx(std::abs(945.0 / bessel5({0.0, w}))).epsilon(1e-9));
  }

  const Waveform dc = make_waveform(ComplexVector(1024, 0.7), 224e9);
  const Waveform out = apply_filter(dc, b);
  for (const auto& s : out.samples) CHECK(std::abs(s - Complex(0.7, 0.0)) < 1e-12);

  CHECK_THROWS_AS(apply_filter(dc, FilterSpec::bessel(112e9)), std::invalid_argument);
  CHECK_THROWS_AS(apply_filter(dc, FilterSpec::rectangular(120e9)), std::invalid_argument);
}

TEST_CASE("rectangular lowpass rejects out-of-band noise") {
  const double fs = 224e9;
  const Waveform w = apply_filter(white_noise(1u << 16, fs, 4), FilterSpec::rectangular(28e9));
  const Spectrum sp = power_spectrum(w);
  const double in = band_power(sp, -27e9, 27e9) / 54e9;
  const double out = (band_power(sp, 29e9, 111e9) + band_power(sp, -112e9, -29e9)) / 165e9;
  CHECK(10.0 * std::log10(out / in + 1e-300) < -100.0);
}

TEST_CASE("interleaver passband") {
  const FilterSpec il = FilterSpec::interleaver(42e9, 100e9, 0.0, 3);
  CHECK(std::abs(transfer(il, 0.0)) == doctest::Approx(1.0));
  CHECK(20.0 * std::log10(std::abs(transfer(il, 21e9))) == doctest::Approx(-3.0103).epsilon(0.01));
  CHECK(std::abs(transfer(il, 40e9)) < std::abs(transfer(il, 21e9)));
  CHECK(std::abs(transfer(il, 100e9)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(validate(FilterSpec::interleaver(120e9, 100e9)), std::invalid_argument);
}
