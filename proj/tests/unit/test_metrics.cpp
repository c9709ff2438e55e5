#include <doctest.h>

#include <cmath>
#include <random>

#include "dwdm80/common/error.hpp"
#include "dwdm80/dmt/qam.hpp"
#include "dwdm80/metrics/analytic.hpp"
#include "dwdm80/metrics/ber.hpp"
#include "dwdm80/metrics/search.hpp"
#include "dwdm80/pam4/pam4.hpp"

using namespace dwdm80;
using namespace dwdm80::metrics;

namespace {

BerResult exact(double ber) {
  BerResult r;
  r.ber = ber;
  return r;
}

// Q by trapezoidal integration of the Gaussian density.
double q_numeric(double x) {
  const int n = 200000;
  const double hi = x + 12.0, h = (hi - x) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = x + i * h;
    s += (i == 0 || i == n ? 0.5 : 1.0) * std::exp(-0.5 * t * t);
  }
  return s * h / std::sqrt(2.0 * kPi);
}

}  // namespace

TEST_CASE("ber counting and Wilson interval") {
  signal::BitStream a, b;
  a.bits.assign(1000, 0);
  b.bits.assign(1000, 1);
  CHECK(count_ber(a, a).ber == 0.0);
  CHECK(count_ber(a, b).ber == 1.0);
  b.bits.resize(999);
  CHECK_THROWS_AS(count_ber(a, b), std::invalid_argument);

  const BerResult r = make_ber(10, 10000);
  CHECK(r.ber == doctest::Approx(1e-3));
  const double n = 1e4, p = 1e-3, z = 1.959963984540054;
  const double half = z / (1 + z * z / n) * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
  CHECK(r.ci95 == doctest::Approx(half).epsilon(1e-12));
  CHECK(wilson95(10, 10000).center == doctest::Approx((p + z * z / (2 * n)) / (1 + z * z / n)));

  BerResult sum = make_ber(3, 100);
  sum += make_ber(7, 900);
  CHECK(sum.errors == 10);
  CHECK(sum.bits == 1000);
  CHECK(sum.ber == doctest::Approx(0.01));
  CHECK(make_ber(0, 0).ber == 0.0);

  CHECK(bits_for_confidence(1e-3, 0.1) == static_cast<std::uint64_t>(std::ceil(z * z * 0.999 / (0.01 * 1e-3))));
}

TEST_CASE("fec thresholds") {
  const auto hd = FecThreshold::hard_decision();
  const auto sd = FecThreshold::soft_decision();
  CHECK(hd.ber_limit == 4e-3);
  CHECK(sd.ber_limit == 1.9e-2);
  CHECK(hd.passes(4e-3));
  CHECK_FALSE(hd.passes(4.01e-3));
  CHECK(hd.net_rate(107e9) == doctest::Approx(100e9));
  CHECK(sd.net_rate(120e9) == doctest::Approx(100e9));
  CHECK(hd.name() == "hd");
  CHECK(sd.name() == "sd");
}

TEST_CASE("q function and inverse") {
  CHECK(q_func(0.0) == 0.5);
  CHECK(q_func(3.0902) == doctest::Approx(1.000e-3).epsilon(1e-3));
  CHECK(std::abs(q_func(3.0902) - q_numeric(3.0902)) < 1e-9);
  CHECK(std::abs(q_inv(4e-3) - 2.652) < 0.001);
  CHECK(q_inv(0.5) == doctest::Approx(0.0).scale(1.0));
  for (double x = 0.0; x <= 8.0; x += 0.125) {
    CAPTURE(x);
    CHECK(std::abs(q_inv(q_func(x)) - x) < 1e-9);
  }
  CHECK_THROWS_AS(q_inv(0.0), std::invalid_argument);
  CHECK_THROWS_AS(q_inv(1.0), std::invalid_argument);
}

TEST_CASE("square QAM on AWGN") {
  const double snr = std::pow(10.0, 0.98);
  CHECK(ber_mqam_awgn(4, snr) == doctest::Approx(q_func(std::sqrt(snr))));
  CHECK(ber_mqam_awgn(4, snr) == doctest::Approx(9.8e-4).epsilon(0.03));
  for (int m : {4, 16, 64, 256}) {
    const double sat = 4.0 / std::log2(m) * (1.0 - 1.0 / std::sqrt(m)) * 0.5;
    CHECK(ber_mqam_awgn(m, 0.0) == doctest::Approx(sat));
  }
  CHECK(ber_mqam_awgn(16, 100.0) < ber_mqam_awgn(16, 50.0));
  CHECK_THROWS_AS(ber_mqam_awgn(32, 10.0), std::invalid_argument);
}

TEST_CASE("OSNR to SNR conversion") {
  CHECK(osnr_to_snr(20.0, 25e9, 1) == doctest::Approx(100.0));
  CHECK(10.0 * std::log10(osnr_to_snr(0.0, 25e9, 1) / osnr_to_snr(0.0, 56e9, 1)) ==
        doctest::Approx(10.0 * std::log10(56.0 / 25.0)));
  CHECK(10.0 * std::log10(56.0 / 25.0) == doctest::Approx(3.50).epsilon(2e-3));
  CHECK(10.0 * std::log10(osnr_to_snr(15.0, 56e9, 1) / osnr_to_snr(15.0, 56e9, 2)) ==
        doctest::Approx(3.0103).epsilon(1e-4));
  CHECK(snr_to_osnr_db(osnr_to_snr(17.3, 56e9, 2), 56e9, 2) == doctest::Approx(17.3));
}

TEST_CASE("semi-analytic pam4") {
  const pam4::PamScheme field{pam4::LevelSpacing::equidistant_field};
  const pam4::PamScheme power{pam4::LevelSpacing::equidistant_power};
  CHECK(pam4_dd_ber_semianalytic(80.0, power, 56e9, 28e9) < 1e-12);
  for (double osnr : {18.0, 22.0, 26.0}) {
    CHECK(pam4_dd_ber_semianalytic(osnr, field, 56e9, 28e9) <= pam4_dd_ber_semianalytic(osnr, power, 56e9, 28e9));
  }
  const double rf = pam4_required_osnr_semianalytic(4e-3, field, 56e9, 28e9);
  const double rp = pam4_required_osnr_semianalytic(4e-3, power, 56e9, 28e9);
  CHECK(rf < rp);
  CHECK(pam4_dd_ber_semianalytic(rf, field, 56e9, 28e9) == doctest::Approx(4e-3).epsilon(0.01));
}

TEST_CASE("required OSNR search") {
  const double bw = 28e9;
  const BerFunction qpsk = [&](double osnr) { return exact(ber_mqam_awgn(4, osnr_to_snr(osnr, bw, 1))); };
  const double closed = snr_to_osnr_db(std::pow(q_inv(1e-3), 2), bw, 1);
  const auto r = required_osnr(qpsk, 1e-3, {5.0, 50.0, 0.01});
  CHECK_FALSE(r.saturated);
  CHECK(r.osnr_db >= closed);
  CHECK(r.osnr_db - closed <= 0.01);
  CHECK(mqam_required_osnr(4, 1e-3, bw, 1) == doctest::Approx(closed).epsilon(1e-4));

  // Lower target BER needs more OSNR.
  double prev = 0.0;
  for (double t : {1e-2, 1e-3, 1e-4}) {
    const double o = required_osnr(qpsk, t).osnr_db;
    CHECK(o > prev);
    prev = o;
  }

  const auto sat = required_osnr([](double) { return exact(0.0); }, 1e-3);
  CHECK(sat.saturated);
  CHECK(sat.osnr_db == 5.0);
  CHECK(required_osnr(qpsk, 1e-3).osnr_db == required_osnr(qpsk, 1e-3).osnr_db);
  CHECK_THROWS_AS(required_osnr([](double) { return exact(0.3); }, 1e-3), OutOfBracket);
}

TEST_CASE("maximum reach search") {
  const auto hd = FecThreshold::hard_decision();
  FecThreshold all = hd;
  all.ber_limit = 1.0;
  const BerFunction rising = [](double km) { return exact(std::min(0.5, 1e-4 * std::exp(km / 5.0))); };
  CHECK(max_reach(rising, all).reach_km == 160.0);

  const auto r = max_reach(rising, hd, {2.0, 0.0, 160.0, 0.01});
  const double truth = 5.0 * std::log(40.0);
  CHECK(r.reach_km <= truth);
  CHECK(truth - r.reach_km <= 0.01);
  CHECK(r.passes_at_low);
  CHECK_FALSE(r.non_monotone);

  const auto none = max_reach([](double) { return exact(0.1); }, hd);
  CHECK_FALSE(none.passes_at_low);
  CHECK(none.reach_km == 0.0);

  // Pass, fail, pass again: the first interval wins.
  const BerFunction notch = [](double km) { return exact(km > 9.0 && km < 13.0 ? 1e-2 : 1e-4); };
  const auto nm = max_reach(notch, hd, {2.0, 0.0, 40.0, 0.05});
  CHECK(nm.non_monotone);
  CHECK(nm.reach_km == doctest::Approx(9.0).epsilon(0.01));
}

TEST_CASE("monte-carlo QPSK agrees with the closed form") {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution bit;
  for (double snr_db : {7.0, 9.0}) {
    const double snr = std::pow(10.0, snr_db / 10.0);
    std::normal_distribution<double> n(0.0, std::sqrt(0.5 / snr));
    std::uint64_t errors = 0;
    const std::uint64_t symbols = 200000;
    std::uint8_t in[2], out[2];
    for (std::uint64_t s = 0; s < symbols; ++s) {
      in[0] = bit(rng);
      in[1] = bit(rng);
      dmt::qam_demap(dmt::qam_map(in, 2) + Complex(n(rng), n(rng)), 2, out);
      errors += (in[0] != out[0]) + (in[1] != out[1]);
    }
    const auto r = make_ber(errors, 2 * symbols);
    CHECK(std::abs(r.ber - ber_mqam_awgn(4, snr)) <= 3.0 * r.ci95 / 1.96);
  }
}
