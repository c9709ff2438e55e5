#include "dwdm80/signal/filter.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "dwdm80/signal/fft.hpp"
#include "dwdm80/simd/kernels.hpp"

namespace dwdm80::signal {
namespace {

constexpr int kMaxBesselOrder = 10;

double factorial(int n) {
  double v = 1.0;
  for (int i = 2; i <= n; ++i) v *= i;
  return v;
}

// Reverse Bessel polynomial coefficients, a_k = (2N-k)! / (2^(N-k) k! (N-k)!).
std::vector<double> bessel_coefficients(int order) {
  std::vector<double> a(order + 1);
  for (int k = 0; k <= order; ++k) {
    a[k] = factorial(2 * order - k) /
           (std::ldexp(1.0, order - k) * factorial(k) * factorial(order - k));
  }
  return a;
}

Complex bessel_prototype(const std::vector<double>& a, double w) {
  // theta(0) / theta(j w)
  Complex s(0.0, w);
  Complex acc(0.0, 0.0);
  for (int k = static_cast<int>(a.size()) - 1; k >= 0; --k) acc = acc * s + a[k];
  return a[0] / acc;
}

double find_cutoff(const std::vector<double>& a) {
  double lo = 0.0;
  double hi = 1.0;
  while (std::norm(bessel_prototype(a, hi)) > 0.5) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::norm(bessel_prototype(a, mid)) > 0.5) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct BesselTable {
  std::array<std::vector<double>, kMaxBesselOrder + 1> coeffs;
  std::array<double, kMaxBesselOrder + 1> cutoff{};
  BesselTable() {
    for (int n = 1; n <= kMaxBesselOrder; ++n) {
      coeffs[n] = bessel_coefficients(n);
      cutoff[n] = find_cutoff(coeffs[n]);
    }
  }
};

const BesselTable& bessel_table() {
  static const BesselTable table;
  return table;
}

}  // namespace

FilterSpec FilterSpec::bessel(double cutoff_hz, int order) {
  return FilterSpec{FilterKind::bessel_lowpass, order, cutoff_hz, 0.0, 0.0};
}

FilterSpec FilterSpec::rectangular(double cutoff_hz) {
  return FilterSpec{FilterKind::rectangular_lowpass, 1, cutoff_hz, 0.0, 0.0};
}

FilterSpec FilterSpec::interleaver(double bandwidth_hz, double period_hz, double center_hz,
                                   int order) {
  return FilterSpec{FilterKind::interleaver, order, bandwidth_hz, period_hz, center_hz};
}

void validate(const FilterSpec& f) {
  if (!(f.bandwidth > 0.0)) throw std::invalid_argument("filter: cutoff/bandwidth must be > 0");
  if (f.order < 1) throw std::invalid_argument("filter: order must be >= 1");
  if (f.kind == FilterKind::bessel_lowpass && f.order > kMaxBesselOrder) {
    throw std::invalid_argument("filter: bessel order above 10 not supported");
  }
  if (f.kind == FilterKind::interleaver && !(f.period > f.bandwidth)) {
    throw std::invalid_argument("filter: interleaver period must exceed its bandwidth");
  }
}

double bessel_prototype_cutoff(int order) {
  if (order < 1 || order > kMaxBesselOrder) throw std::invalid_argument("bessel order");
  return bessel_table().cutoff[order];
}

Complex transfer(const FilterSpec& f, double frequency) {
  switch (f.kind) {
    case FilterKind::bessel_lowpass: {
      const auto& t = bessel_table();
      const double w = t.cutoff[f.order] * (frequency - f.center) / f.bandwidth;
      return bessel_prototype(t.coeffs[f.order], w);
    }
    case FilterKind::rectangular_lowpass:
      return std::abs(frequency - f.center) <= f.bandwidth ? Complex(1.0) : Complex(0.0);
    case FilterKind::interleaver: {
      double d = std::remainder(frequency - f.center, f.period);
      const double x = std::pow(2.0 * d / f.bandwidth, 2 * f.order);
      return Complex(std::exp(-0.5 * std::log(2.0) * x), 0.0);
    }
  }
  return Complex(0.0);
}

ComplexVector transfer_on_grid(const FilterSpec& f, std::size_t n, double sample_rate) {
  validate(f);
  ComplexVector h(n);
  for (std::size_t k = 0; k < n; ++k) h[k] = transfer(f, bin_frequency(k, n, sample_rate));
  return h;
}

Waveform apply_filter(const Waveform& w, const FilterSpec& f) {
  validate(f);
  if (f.kind != FilterKind::interleaver && f.bandwidth >= 0.5 * w.sample_rate) {
    throw std::invalid_argument("filter: cutoff at or above Nyquist");
  }
  if (w.empty()) return w;
  Waveform out = w;
  fft_inplace(out.samples);
  const ComplexVector h = transfer_on_grid(f, w.size(), w.sample_rate);
  simd::kernels().cmul(out.samples.data(), h.data(), h.size());
  ifft_inplace(out.samples);
  return out;
}

RealSignal apply_filter(const RealSignal& r, const FilterSpec& f) {
  return real_part(apply_filter(to_waveform(r), f));
}

}  // namespace dwdm80::signal
