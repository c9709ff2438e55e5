#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "dwdm80/simd/kernels.hpp"

using namespace dwdm80;
using simd::Isa;

namespace {

std::vector<std::complex<double>> random_complex(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<std::complex<double>> v(n);
  for (auto& z : v) z = {g(rng), g(rng)};
  return v;
}

std::vector<double> random_real(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("scalar kernels match direct loops") {
  const auto& k = simd::scalar_kernels();
  const auto x = random_complex(37, 1);
  const auto h = random_complex(37, 2);
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  CHECK(k.sum_norm(x.data(), x.size()) == doctest::Approx(s).epsilon(1e-14));

  auto y = x;
  k.cmul(y.data(), h.data(), y.size());
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(y[i] - x[i] * h[i]) < 1e-14);

  auto acc = h;
  k.axpy(0.5, x.data(), acc.data(), acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) CHECK(std::abs(acc[i] - (h[i] + 0.5 * x[i])) < 1e-14);
}

TEST_CASE("avx2 kernels are equivalent to the scalar reference") {
  if (!simd::isa_supported(Isa::avx2)) {
    CHECK_THROWS_AS(simd::kernels_for(Isa::avx2), std::invalid_argument);
    return;
  }
  const auto& ref = simd::scalar_kernels();
  const auto& v = simd::kernels_for(Isa::avx2);
  CHECK(v.isa == Isa::avx2);

  // Odd lengths exercise the vector tails.
  for (std::size_t n : {0u, 1u, 2u, 3u, 7u, 8u, 33u, 1000u, 4097u}) {
    CAPTURE(n);
    const auto x = random_complex(n, 10 + static_cast<unsigned>(n));
    const auto h = random_complex(n, 20 + static_cast<unsigned>(n));
    const auto a = random_real(n, 30 + static_cast<unsigned>(n));
    const auto b = random_real(n, 40 + static_cast<unsigned>(n));

    CHECK(rel_diff(v.sum_norm(x.data(), n), ref.sum_norm(x.data(), n)) < 1e-12);
    CHECK(rel_diff(v.dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n)) < 1e-12);

    std::vector<double> o1(n), o2(n);
    v.norm(x.data(), o1.data(), n);
    ref.norm(x.data(), o2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel_diff(o1[i], o2[i]) < 1e-14);

    v.accumulate_norm(h.data(), o1.data(), n);
    ref.accumulate_norm(h.data(), o2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel_diff(o1[i], o2[i]) < 1e-14);

    auto y1 = x, y2 = x;
    v.cmul(y1.data(), h.data(), n);
    ref.cmul(y2.data(), h.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-13);

    v.axpy(-1.25, h.data(), y1.data(), n);
    ref.axpy(-1.25, h.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-13);
  }
}

TEST_CASE("runtime selection returns a supported table") {
  const auto& k = simd::kernels();
  CHECK(simd::isa_supported(k.isa));
  CHECK(simd::isa_name(Isa::scalar) == "scalar");
  CHECK(simd::isa_name(Isa::avx2) == "avx2");
}
