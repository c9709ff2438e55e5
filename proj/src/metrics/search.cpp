#include "dwdm80/metrics/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dwdm80/common/error.hpp"

namespace dwdm80::metrics {

RequiredOsnr required_osnr(const BerFunction& ber_at_osnr, double target_ber,
                           const OsnrSearchOptions& opt) {
  if (!(target_ber > 0.0 && target_ber < 1.0)) {
    throw std::invalid_argument("required_osnr: target_ber must lie in (0, 1)");
  }
  if (!(opt.low_db < opt.high_db) || !(opt.tol_db > 0.0)) {
    throw std::invalid_argument("required_osnr: bad bracket or tolerance");
  }
  RequiredOsnr out;
  auto eval = [&](double osnr) {
    BerResult r = ber_at_osnr(osnr);
    out.evaluations.emplace_back(osnr, r);
    return r.ber;
  };
  const double ber_low = eval(opt.low_db);
  if (ber_low <= target_ber) {
    out.osnr_db = opt.low_db;
    out.saturated = true;
    return out;
  }
  const double ber_high = eval(opt.high_db);
  if (ber_high > target_ber) throw OutOfBracket(ber_low, ber_high);

  double lo = opt.low_db;
  double hi = opt.high_db;
  while (hi - lo > opt.tol_db) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) > target_ber) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.osnr_db = hi;
  return out;
}

MaxReach max_reach(const BerFunction& ber_at_km, const FecThreshold& fec,
                   const ReachSearchOptions& opt) {
  if (!(opt.step_km > 0.0) || !(opt.low_km < opt.high_km) || !(opt.tol_km > 0.0)) {
    throw std::invalid_argument("max_reach: bad step, bracket or tolerance");
  }
  MaxReach out;
  auto passes = [&](double km) {
    BerResult r = ber_at_km(km);
    out.evaluations.emplace_back(km, r);
    return fec.passes(r.ber);
  };

  if (!passes(opt.low_km)) {
    out.passes_at_low = false;
    out.reach_km = opt.low_km;
    return out;
  }

  const auto n_steps = static_cast<long>(std::ceil((opt.high_km - opt.low_km) / opt.step_km - 1e-9));
  double last_pass = opt.low_km;
  double first_fail = -1.0;
  for (long i = 1; i <= n_steps; ++i) {
    const double km = std::min(opt.low_km + static_cast<double>(i) * opt.step_km, opt.high_km);
    const bool ok = passes(km);
    if (first_fail < 0.0) {
      if (ok) {
        last_pass = km;
      } else {
        first_fail = km;
      }
    } else if (ok) {
      out.non_monotone = true;
      break;
    }
  }
  if (first_fail < 0.0) {
    out.reach_km = last_pass;
    return out;
  }
  double lo = last_pass;
  double hi = first_fail;
  while (hi - lo > opt.tol_km) {
    const double mid = 0.5 * (lo + hi);
    if (passes(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.reach_km = lo;
  return out;
}

}  // namespace dwdm80::metrics
