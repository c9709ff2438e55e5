#include "dwdm80/pam4/ffe.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dwdm80/common/error.hpp"
#include "dwdm80/simd/kernels.hpp"

namespace dwdm80::pam4 {
namespace {

// Window of n taps ending at k + c going backwards: x_{k+c}, x_{k+c-1}, ...
void fill_window(std::span<const double> rx, std::size_t k, std::size_t n_taps, double* out) {
  const std::size_t n = rx.size();
  const std::size_t c = n_taps / 2;
  std::size_t idx = (k + c) % n;
  for (std::size_t j = 0; j < n_taps; ++j) {
    out[j] = rx[idx];
    idx = (idx == 0) ? n - 1 : idx - 1;
  }
}

RealVector least_squares(std::span<const double> rx, std::span<const double> desired,
                         const FfeConfig& cfg) {
  const std::size_t m = cfg.n_taps;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                            static_cast<Eigen::Index>(m));
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  std::vector<double> win(m);
  for (std::size_t k = 0; k < cfg.training_length; ++k) {
    fill_window(rx, k, m, win.data());
    const Eigen::Map<const Eigen::VectorXd> x(win.data(), static_cast<Eigen::Index>(m));
    r.selfadjointView<Eigen::Lower>().rankUpdate(x);
    p += desired[k] * x;
  }
  r.triangularView<Eigen::Upper>() = r.transpose();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(r);
  const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success || !(d.maxCoeff() > 0.0) || d.minCoeff() < 1e-12 * d.maxCoeff()) {
    throw SingularRegression("train_ffe: singular regression (received training data "
                             "has no usable variation)");
  }
  const Eigen::VectorXd w = ldlt.solve(p);
  return RealVector(w.data(), w.data() + w.size());
}

RealVector lms(std::span<const double> rx, std::span<const double> desired,
               const FfeConfig& cfg) {
  const std::size_t m = cfg.n_taps;
  RealVector w(m, 0.0);
  w[m / 2] = 1.0;
  std::vector<double> win(m);
  const auto& k = simd::kernels();
  for (std::size_t epoch = 0; epoch < cfg.lms_epochs; ++epoch) {
    const double mu = cfg.lms_step / (1.0 + static_cast<double>(epoch));
    for (std::size_t s = 0; s < cfg.training_length; ++s) {
      fill_window(rx, s, m, win.data());
      const double y = k.dot(w.data(), win.data(), m);
      const double e = desired[s] - y;
      const double norm = k.dot(win.data(), win.data(), m) + 1e-300;
      const double g = mu * e / norm;
      for (std::size_t j = 0; j < m; ++j) w[j] += g * win[j];
    }
  }
  return w;
}

}  // namespace

void validate(const FfeConfig& cfg) {
  if (cfg.n_taps == 0 || cfg.n_taps % 2 == 0) {
    throw std::invalid_argument("ffe: n_taps must be odd");
  }
  if (cfg.training_length < 10 * cfg.n_taps) {
    throw std::invalid_argument("ffe: training_length must be >= 10 * n_taps");
  }
}

RealVector train_ffe(std::span<const double> rx, std::span<const double> desired,
                     const FfeConfig& cfg) {
  validate(cfg);
  if (desired.size() < cfg.training_length || rx.size() < cfg.training_length) {
    throw std::invalid_argument("ffe: fewer samples than training_length");
  }
  if (cfg.adaptation == FfeAdaptation::least_squares) return least_squares(rx, desired, cfg);
  return lms(rx, desired, cfg);
}

RealVector apply_ffe(std::span<const double> rx, std::span<const double> taps) {
  const std::size_t m = taps.size();
  RealVector out(rx.size());
  std::vector<double> win(m);
  const auto& k = simd::kernels();
  for (std::size_t i = 0; i < rx.size(); ++i) {
    fill_window(rx, i, m, win.data());
    out[i] = k.dot(taps.data(), win.data(), m);
  }
  return out;
}

}  // namespace dwdm80::pam4
