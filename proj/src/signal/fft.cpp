#include "dwdm80/signal/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace dwdm80::signal {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    ComplexVector scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("fftw planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(ComplexVector& x, int sign) {
  if (x.empty()) return;
  fftw_plan plan = cache().get(x.size(), sign);
  auto* buf = reinterpret_cast<fftw_complex*>(x.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void fft_inplace(ComplexVector& x) { execute(x, FFTW_FORWARD); }

void ifft_inplace(ComplexVector& x) {
  execute(x, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : x) v *= scale;
}

ComplexVector fft(const ComplexVector& x) {
  ComplexVector y = x;
  fft_inplace(y);
  return y;
}

ComplexVector ifft(const ComplexVector& spectrum) {
  ComplexVector y = spectrum;
  ifft_inplace(y);
  return y;
}

double bin_frequency(std::size_t k, std::size_t n, double sample_rate) {
  const auto kk = static_cast<long long>(k);
  const auto nn = static_cast<long long>(n);
  const long long signed_k = (2 * kk >= nn) ? kk - nn : kk;
  return static_cast<double>(signed_k) * sample_rate / static_cast<double>(n);
}

ComplexVector circular_xcorr(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("circular_xcorr: size mismatch");
  ComplexVector fa = fft(a);
  ComplexVector fb = fft(b);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= std::conj(fb[k]);
  ifft_inplace(fa);
  return fa;
}

}  // namespace dwdm80::signal
