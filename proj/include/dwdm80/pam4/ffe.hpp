#pragma once

#include <cstddef>
#include <span>

#include "dwdm80/common/types.hpp"

namespace dwdm80::pam4 {

enum class FfeAdaptation { least_squares, lms };

/// Symbol-spaced feed-forward equalizer settings. The reference tap is the
/// center one, so n_taps must be odd.
struct FfeConfig {
  std::size_t n_taps = 13;
  std::size_t training_length = 2000;  // symbols, >= 10 * n_taps
  FfeAdaptation adaptation = FfeAdaptation::least_squares;
  double lms_step = 0.02;    // normalized LMS step
  std::size_t lms_epochs = 40;
};

void validate(const FfeConfig& cfg);

/// Trains taps w so that sum_j w_j x_{k+c-j} approximates desired_k over the
/// first training_length symbols (c = center index, circular indexing of rx).
/// least_squares returns the Wiener solution of that regression; lms runs
/// normalized LMS passes over the same data with a decaying step.
/// Throws SingularRegression when the regression matrix is singular.
RealVector train_ffe(std::span<const double> rx, std::span<const double> desired,
                     const FfeConfig& cfg);

/// y_k = sum_j w_j x_{k+c-j}, circular.
RealVector apply_ffe(std::span<const double> rx, std::span<const double> taps);

}  // namespace dwdm80::pam4
