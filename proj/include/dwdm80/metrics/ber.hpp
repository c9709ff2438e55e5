#pragma once

#include <cstdint>
#include <string>

#include "dwdm80/signal/prbs.hpp"

namespace dwdm80::metrics {

struct BerResult {
  std::uint64_t errors = 0;
  std::uint64_t bits = 0;
  double ber = 0.0;
  double ci95 = 0.0;  // Wilson 95% half-width

  /// Sums counts and recomputes ber and ci95.
  BerResult& operator+=(const BerResult& other);
};

/// Builds a result from counts. bits == 0 gives ber 0 and ci95 0.
BerResult make_ber(std::uint64_t errors, std::uint64_t bits);

/// Exact error count between equal-length streams.
BerResult count_ber(const signal::BitStream& tx, const signal::BitStream& rx);

/// Wilson score interval at 95% confidence.
struct WilsonInterval {
  double center;
  double half_width;
};
WilsonInterval wilson95(std::uint64_t errors, std::uint64_t bits);

enum class FecKind { hd, sd };

struct FecThreshold {
  FecKind kind = FecKind::hd;
  double ber_limit = 4e-3;
  double overhead = 0.07;

  std::string name() const { return kind == FecKind::hd ? "hd" : "sd"; }
  bool passes(double ber) const noexcept { return ber <= ber_limit; }
  double net_rate(double raw_rate) const noexcept { return raw_rate / (1.0 + overhead); }

  static FecThreshold hard_decision() { return {FecKind::hd, 4e-3, 0.07}; }
  static FecThreshold soft_decision() { return {FecKind::sd, 1.9e-2, 0.20}; }
};

/// Bits needed so that the Wilson half-width at `ber` stays below
/// `fraction * ber` (normal approximation, 1.96 sigma).
std::uint64_t bits_for_confidence(double ber, double fraction);

}  // namespace dwdm80::metrics
