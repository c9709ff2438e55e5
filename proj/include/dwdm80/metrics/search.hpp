#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "dwdm80/metrics/ber.hpp"

namespace dwdm80::metrics {

/// BER of an executable link at one operating point (OSNR in dB or
/// distance in km).
using BerFunction = std::function<BerResult(double)>;

struct OsnrSearchOptions {
  double low_db = 5.0;
  double high_db = 50.0;
  double tol_db = 0.1;
};

struct RequiredOsnr {
  double osnr_db = 0.0;
  bool saturated = false;  // the lower bracket edge already meets the target
  std::vector<std::pair<double, BerResult>> evaluations;
};

/// Bisection for the lowest OSNR with BER <= target_ber. Throws OutOfBracket
/// when the upper edge fails.
RequiredOsnr required_osnr(const BerFunction& ber_at_osnr, double target_ber,
                           const OsnrSearchOptions& opt = {});

struct ReachSearchOptions {
  double step_km = 2.0;
  double low_km = 0.0;
  double high_km = 160.0;
  double tol_km = 0.25;
};

struct MaxReach {
  double reach_km = 0.0;
  bool passes_at_low = true;   // false: even the lower edge fails (reach_km = low_km)
  bool non_monotone = false;   // a later scan point passed again after a failure
  std::vector<std::pair<double, BerResult>> evaluations;
};

/// Coarse scan at step_km, then bisection between the last passing and the
/// first failing distance of the first contiguous passing interval.
MaxReach max_reach(const BerFunction& ber_at_km, const FecThreshold& fec,
                   const ReachSearchOptions& opt = {});

}  // namespace dwdm80::metrics
