// Compiled with -mavx2 -mfma. Only reached through the dispatcher after a
// runtime CPU check.
#include <immintrin.h>

#include "dwdm80/simd/kernels.hpp"

namespace dwdm80::simd::detail {
namespace {

// Horizontal sum of the four lanes.
inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_norm_avx2(const std::complex<double>* x, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(x);
  const std::size_t m = 2 * n;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= m; i += 8) {
    const __m256d a = _mm256_loadu_pd(p + i);
    const __m256d b = _mm256_loadu_pd(p + i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  for (; i + 4 <= m; i += 4) {
    const __m256d a = _mm256_loadu_pd(p + i);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < m; ++i) acc += p[i] * p[i];
  return acc;
}

// |x|^2 for two complex values held in one register: (re0 im0 re1 im1)
inline __m128d pair_norm(__m256d v) {
  const __m256d sq = _mm256_mul_pd(v, v);
  const __m128d lo = _mm256_castpd256_pd128(sq);
  const __m128d hi = _mm256_extractf128_pd(sq, 1);
  return _mm_hadd_pd(lo, hi);
}

void norm_avx2(const std::complex<double>* x, double* out, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm_storeu_pd(out + i, pair_norm(_mm256_loadu_pd(p + 2 * i)));
  }
  for (; i < n; ++i) out[i] = p[2 * i] * p[2 * i] + p[2 * i + 1] * p[2 * i + 1];
}

void accumulate_norm_avx2(const std::complex<double>* x, double* out, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m128d acc = _mm_loadu_pd(out + i);
    _mm_storeu_pd(out + i, _mm_add_pd(acc, pair_norm(_mm256_loadu_pd(p + 2 * i))));
  }
  for (; i < n; ++i) out[i] += p[2 * i] * p[2 * i] + p[2 * i + 1] * p[2 * i + 1];
}

void cmul_avx2(std::complex<double>* x, const std::complex<double>* h, std::size_t n) {
  double* px = reinterpret_cast<double*>(x);
  const double* ph = reinterpret_cast<const double*>(h);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d a = _mm256_loadu_pd(px + 2 * i);  // ar ai ar ai
    const __m256d b = _mm256_loadu_pd(ph + 2 * i);  // br bi br bi
    const __m256d br = _mm256_movedup_pd(b);         // br br
    const __m256d bi = _mm256_permute_pd(b, 0xF);    // bi bi
    const __m256d a_swap = _mm256_permute_pd(a, 0x5);  // ai ar
    // (ar*br - ai*bi, ai*br + ar*bi); no FMA so results match the scalar path
    const __m256d t1 = _mm256_mul_pd(a, br);
    const __m256d t2 = _mm256_mul_pd(a_swap, bi);
    _mm256_storeu_pd(px + 2 * i, _mm256_addsub_pd(t1, t2));
  }
  for (; i < n; ++i) {
    const double re = x[i].real() * h[i].real() - x[i].imag() * h[i].imag();
    const double im = x[i].real() * h[i].imag() + x[i].imag() * h[i].real();
    x[i] = {re, im};
  }
}

void axpy_avx2(double a, const std::complex<double>* x, std::complex<double>* y,
               std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  const std::size_t m = 2 * n;
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d vx = _mm256_loadu_pd(px + i);
    const __m256d vy = _mm256_loadu_pd(py + i);
    _mm256_storeu_pd(py + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
  }
  for (; i < m; ++i) py[i] += a * px[i];
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

constexpr KernelTable kAvx2{Isa::avx2,  &sum_norm_avx2, &norm_avx2,
                            &accumulate_norm_avx2, &cmul_avx2,
                            &axpy_avx2, &dot_avx2};

}  // namespace

const KernelTable& avx2_kernels() noexcept { return kAvx2; }

}  // namespace dwdm80::simd::detail
