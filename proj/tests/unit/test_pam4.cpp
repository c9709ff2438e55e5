#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dwdm80/channel/detect.hpp"
#include "dwdm80/channel/fiber.hpp"
#include "dwdm80/common/error.hpp"
#include "dwdm80/experiment/links.hpp"
#include "dwdm80/pam4/ffe.hpp"
#include "dwdm80/pam4/pam4.hpp"
#include "dwdm80/signal/prbs.hpp"

using namespace dwdm80;
using namespace dwdm80::pam4;

namespace {

signal::BitStream bits_of(std::initializer_list<int> v) {
  signal::BitStream b;
  for (int x : v) b.bits.push_back(static_cast<std::uint8_t>(x));
  return b;
}

RealVector random_levels(std::size_t n, unsigned seed, const PamScheme& scheme) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> u(0, 3);
  const auto lv = scheme.intensity_levels();
  RealVector d(n);
  for (auto& x : d) x = lv[static_cast<std::size_t>(u(rng))];
  return d;
}

// y_k = sum_j w_j x_{k+c-j} as an explicit regression solved by Gauss-Jordan.
RealVector wiener_oracle(const RealVector& rx, const RealVector& desired, std::size_t taps,
                         std::size_t train) {
  const std::size_t n = rx.size(), c = taps / 2;
  std::vector<std::vector<double>> a(taps, std::vector<double>(taps + 1, 0.0));
  for (std::size_t k = 0; k < train; ++k) {
    std::vector<double> x(taps);
    for (std::size_t j = 0; j < taps; ++j) x[j] = rx[(k + c + n - j) % n];
    for (std::size_t i = 0; i < taps; ++i) {
      for (std::size_t j = 0; j < taps; ++j) a[i][j] += x[i] * x[j];
      a[i][taps] += x[i] * desired[k];
    }
  }
  for (std::size_t col = 0; col < taps; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < taps; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    for (std::size_t r = 0; r < taps; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t j = col; j <= taps; ++j) a[r][j] -= f * a[col][j];
    }
  }
  RealVector w(taps);
  for (std::size_t i = 0; i < taps; ++i) w[i] = a[i][taps] / a[i][i];
  return w;
}

}  // namespace

TEST_CASE("gray labeling and level values") {
  CHECK(gray_level(0, 0) == 0);
  CHECK(gray_level(0, 1) == 1);
  CHECK(gray_level(1, 1) == 2);
  CHECK(gray_level(1, 0) == 3);
  for (int l = 0; l < 4; ++l) {
    const auto b = gray_bits(l);
    CHECK(gray_level(b[0], b[1]) == l);
  }
  // Adjacent levels differ in exactly one bit.
  for (int l = 0; l < 3; ++l) {
    const auto a = gray_bits(l), b = gray_bits(l + 1);
    CHECK((a[0] != b[0]) + (a[1] != b[1]) == 1);
  }

  const PamScheme field{LevelSpacing::equidistant_field};
  const PamScheme power{LevelSpacing::equidistant_power};
  CHECK(pam4_map(bits_of({0, 0}), field)[0] == 0.0);
  CHECK(pam4_map(bits_of({1, 0}), field)[0] == doctest::Approx(1.0));
  CHECK(pam4_map(bits_of({1, 1}), power)[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(pam4_map(bits_of({0, 1}), field)[0] == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(pam4_map(bits_of({0, 1, 1}), field), std::invalid_argument);

  for (const auto& s : {field, power}) {
    const auto iv = s.intensity_levels();
    CHECK((iv[0] + iv[1] + iv[2] + iv[3]) / 4.0 == doctest::Approx(1.0));
  }
  const auto pi = power.intensity_levels();
  CHECK(pi[2] - pi[1] == doctest::Approx(pi[1] - pi[0]));

  const auto bits = signal::random_bits(3, 1000);
  CHECK(pam4_demap(pam4_symbols(bits)).bits == bits.bits);
}

TEST_CASE("pam4 modulation") {
  const RealVector top(64, 1.0);
  const auto w = pam4_modulate(top, 56e9, 4, std::nullopt);
  CHECK(w.sample_rate == 224e9);
  for (const auto& s : w.samples) CHECK(std::abs(s - Complex(1.0)) < 1e-12);
  CHECK(signal::mean_power(w) == doctest::Approx(1.0));
  CHECK_THROWS_AS(pam4_modulate(top, 56e9, 1, std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(pam4_modulate(top, 56e9, 4, signal::FilterSpec::bessel(120e9)), std::invalid_argument);

  // Alternating L0/L3: a 15 GHz TX filter closes the eye.
  RealVector alt(256);
  for (std::size_t k = 0; k < alt.size(); ++k) alt[k] = (k % 2) ? 1.0 : 0.0;
  auto eye = [&](const std::optional<signal::FilterSpec>& f) {
    const auto y = channel::photodetect(pam4_modulate(alt, 56e9, 4, f)).samples;
    double lo_top = 1e300, hi_bottom = -1e300;
    for (std::size_t k = 0; k < alt.size(); ++k) {
      const double v = y[4 * k + 2];
      if (alt[k] > 0.5) lo_top = std::min(lo_top, v);
      else hi_bottom = std::max(hi_bottom, v);
    }
    return lo_top - hi_bottom;
  };
  CHECK(eye(signal::FilterSpec::bessel(15e9)) < eye(std::nullopt));
}

TEST_CASE("ffe on an identity channel is a delta") {
  const PamScheme s;
  const RealVector d = random_levels(4000, 1, s);
  FfeConfig cfg;
  const RealVector w = train_ffe(d, d, cfg);
  for (std::size_t j = 0; j < w.size(); ++j) CHECK(std::abs(w[j] - (j == w.size() / 2 ? 1.0 : 0.0)) < 1e-6);

  const RealVector flat(4000, 0.5);
  CHECK_THROWS_AS(train_ffe(flat, d, cfg), SingularRegression);
  FfeConfig even = cfg;
  even.n_taps = 12;
  CHECK_THROWS_AS(train_ffe(d, d, even), std::invalid_argument);
}

TEST_CASE("ffe equalizes a 3-tap ISI channel") {
  const PamScheme s;
  const std::size_t n = 6000;
  const RealVector d = random_levels(n, 2, s);
  RealVector rx(n);
  for (std::size_t k = 0; k < n; ++k) rx[k] = 0.2 * d[(k + 1) % n] + d[k] + 0.3 * d[(k + n - 1) % n];

  FfeConfig cfg;
  cfg.training_length = 3000;
  const RealVector w = train_ffe(rx, d, cfg);
  const RealVector oracle = wiener_oracle(rx, d, cfg.n_taps, cfg.training_length);
  for (std::size_t j = 0; j < w.size(); ++j) CHECK(w[j] == doctest::Approx(oracle[j]).epsilon(1e-8));

  const RealVector y = apply_ffe(rx, w);
  double mse = 0.0;
  for (std::size_t k = 0; k < n; ++k) mse += (y[k] - d[k]) * (y[k] - d[k]);
  CHECK(mse / n < 1e-4);
}

TEST_CASE("lms converges to the least-squares taps") {
  const PamScheme s;
  const std::size_t n = 4000;
  const RealVector d = random_levels(n, 3, s);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 0.02);
  RealVector rx(n);
  for (std::size_t k = 0; k < n; ++k) rx[k] = 0.15 * d[(k + 1) % n] + d[k] + 0.25 * d[(k + n - 1) % n] + g(rng);

  FfeConfig ls;
  ls.training_length = n;
  FfeConfig lm = ls;
  lm.adaptation = FfeAdaptation::lms;
  lm.lms_epochs = 200;
  const RealVector a = train_ffe(rx, d, ls);
  const RealVector b = train_ffe(rx, d, lm);
  double diff = 0.0, norm = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    diff += (a[j] - b[j]) * (a[j] - b[j]);
    norm += a[j] * a[j];
  }
  CHECK(std::sqrt(diff / norm) < 0.05);
}

TEST_CASE("gaussian crossing") {
  CHECK(gaussian_crossing(0.0, 1.0, 4.0, 1.0) == doctest::Approx(2.0));
  const double t = gaussian_crossing(0.0, 0.5, 4.0, 1.5);
  CHECK(t > 0.0);
  CHECK(t < 2.0);
  const auto pdf = [](double x, double m, double sd) {
    return std::exp(-0.5 * (x - m) * (x - m) / (sd * sd)) / sd;
  };
  CHECK(pdf(t, 0.0, 0.5) == doctest::Approx(pdf(t, 4.0, 1.5)).epsilon(1e-9));
}

TEST_CASE("noiseless back-to-back pam4 is error free") {
  for (auto spacing : {LevelSpacing::equidistant_field, LevelSpacing::equidistant_power}) {
    experiment::Pam4Link link;
    link.scheme.spacing = spacing;
    for (auto mode : {ThresholdMode::midpoint, ThresholdMode::gaussian_ml, ThresholdMode::min_error}) {
      link.thresholds = mode;
      const auto r = experiment::pam4_trial(link, channel::LinkSpec{}, 20000, 5);
      CHECK(r.errors == 0);
      CHECK(r.bits == 20000);
    }
  }
}

TEST_CASE("receiver diagnostics and sync failure") {
  const PamScheme s{LevelSpacing::equidistant_power};
  const auto bits = signal::random_bits(8, 8000);
  const auto levels = pam4_symbols(bits);
  const auto tx = pam4_modulate(pam4_map(bits, s), 56e9, 4, std::nullopt);
  Pam4RxConfig rc;
  rc.scheme = s;
  const auto res = pam4_receive(channel::ReceivedField{tx, std::nullopt}, levels, rc);
  CHECK(res.bits.bits == bits.bits);
  const auto iv = s.intensity_levels();
  const auto& m = res.diagnostics.level_means;
  for (int l = 0; l < 4; ++l) CHECK(m[l] / m[3] == doctest::Approx(iv[l] / iv[3]).epsilon(1e-6));
  CHECK(res.diagnostics.thresholds[0] == doctest::Approx(0.5 * (m[0] + m[1])).epsilon(1e-6));

  // A record unrelated to the training sequence cannot be synchronized.
  const auto other = signal::random_bits(9, 8000);
  const auto wrong = pam4_modulate(pam4_map(other, s), 56e9, 4, std::nullopt);
  rc.sync_floor = 0.9;
  CHECK_THROWS_AS(pam4_receive(channel::ReceivedField{wrong, std::nullopt}, levels, rc), SyncFailed);
}

TEST_CASE("ffe does not hurt at 80 km") {
  experiment::Pam4Link link;
  link.tx_filter = signal::FilterSpec::bessel(15e9);
  link.rx_filter = signal::FilterSpec::bessel(18e9);
  channel::LinkSpec fiber;
  fiber.length_km = 80.0;
  fiber.osnr_db = 35.0;
  const auto plain = experiment::pam4_trial(link, fiber, 20000, 7);
  link.ffe = FfeConfig{};
  const auto eq = experiment::pam4_trial(link, fiber, 20000, 7);
  CHECK(eq.ber <= plain.ber);
}
