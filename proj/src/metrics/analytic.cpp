#include "dwdm80/metrics/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "dwdm80/channel/noise.hpp"
#include "dwdm80/common/types.hpp"

namespace dwdm80::metrics {

double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double q_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("q_inv: p must lie in (0, 1)");
  // Bracket then bisect on the monotone tail; erfc is accurate deep in the
  // tail so the relative error in p stays small.
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (q_func(mid) > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  // Two Newton steps polish the last ulps.
  for (int i = 0; i < 2; ++i) {
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
    if (pdf <= 0.0) break;
    x += (q_func(x) - p) / pdf;
  }
  return x;
}

double ber_mqam_awgn(int m, double snr) {
  if (m != 4 && m != 16 && m != 64 && m != 256) {
    throw std::invalid_argument("ber_mqam_awgn: M must be 4, 16, 64 or 256");
  }
  if (!(snr >= 0.0)) throw std::invalid_argument("ber_mqam_awgn: snr must be >= 0");
  const double md = static_cast<double>(m);
  return (4.0 / std::log2(md)) * (1.0 - 1.0 / std::sqrt(md)) * q_func(std::sqrt(3.0 * snr / (md - 1.0)));
}

double osnr_to_snr(double osnr_db, double bandwidth_hz, int polarizations) {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("osnr_to_snr: bandwidth must be > 0");
  if (polarizations != 1 && polarizations != 2) {
    throw std::invalid_argument("osnr_to_snr: polarizations must be 1 or 2");
  }
  return std::pow(10.0, osnr_db / 10.0) * 2.0 * kOsnrReferenceBandwidth /
         (polarizations * bandwidth_hz);
}

double snr_to_osnr_db(double snr, double bandwidth_hz, int polarizations) {
  if (!(snr > 0.0)) throw std::invalid_argument("snr_to_osnr_db: snr must be > 0");
  const double unit = osnr_to_snr(0.0, bandwidth_hz, polarizations);
  return 10.0 * std::log10(snr / unit);
}

double gap_from_ber(double target_ber) {
  if (!(target_ber > 0.0 && target_ber < 0.1)) {
    throw std::invalid_argument("gap_from_ber: target must lie in (0, 0.1)");
  }
  const double q = q_inv(2.0 * target_ber);
  return q * q / 3.0;
}

double pam4_dd_ber_semianalytic(double osnr_db, const pam4::PamScheme& scheme, double optical_bw,
                                double electrical_bw) {
  if (!(optical_bw > 0.0) || !(electrical_bw > 0.0)) {
    throw std::invalid_argument("pam4_dd_ber_semianalytic: bandwidths must be > 0");
  }
  const double rho = channel::ase_psd(1.0, osnr_db);
  const auto p = scheme.intensity_levels();
  std::array<double, 4> sigma{};
  for (int i = 0; i < 4; ++i) {
    sigma[i] = std::sqrt(4.0 * p[i] * rho * electrical_bw + 2.0 * rho * rho * optical_bw * electrical_bw);
  }
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double t = pam4::gaussian_crossing(p[i], sigma[i], p[i + 1], sigma[i + 1]);
    sum += q_func((t - p[i]) / sigma[i]) + q_func((p[i + 1] - t) / sigma[i + 1]);
  }
  return sum / 8.0;
}

namespace {

template <typename F>
double bisect_osnr(F&& ber_at, double target_ber) {
  double lo = 5.0;
  double hi = 50.0;
  if (ber_at(hi) > target_ber) throw std::invalid_argument("target BER unreachable below 50 dB OSNR");
  if (ber_at(lo) <= target_ber) return lo;
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    if (ber_at(mid) > target_ber) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double pam4_required_osnr_semianalytic(double target_ber, const pam4::PamScheme& scheme,
                                       double optical_bw, double electrical_bw) {
  return bisect_osnr(
      [&](double osnr) { return pam4_dd_ber_semianalytic(osnr, scheme, optical_bw, electrical_bw); },
      target_ber);
}

double mqam_required_osnr(int m, double target_ber, double bandwidth_hz, int polarizations) {
  return bisect_osnr(
      [&](double osnr) { return ber_mqam_awgn(m, osnr_to_snr(osnr, bandwidth_hz, polarizations)); },
      target_ber);
}

}  // namespace dwdm80::metrics
