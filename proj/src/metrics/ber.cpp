#include "dwdm80/metrics/ber.hpp"

#include <cmath>
#include <stdexcept>

namespace dwdm80::metrics {

namespace {
constexpr double kZ95 = 1.959963984540054;
}

WilsonInterval wilson95(std::uint64_t errors, std::uint64_t bits) {
  if (errors > bits) throw std::invalid_argument("wilson95: errors exceed bits");
  if (bits == 0) return {0.0, 0.0};
  const double n = static_cast<double>(bits);
  const double p = static_cast<double>(errors) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {center, half};
}

BerResult make_ber(std::uint64_t errors, std::uint64_t bits) {
  BerResult r;
  r.errors = errors;
  r.bits = bits;
  if (bits > 0) {
    r.ber = static_cast<double>(errors) / static_cast<double>(bits);
    r.ci95 = wilson95(errors, bits).half_width;
  }
  return r;
}

BerResult& BerResult::operator+=(const BerResult& other) {
  *this = make_ber(errors + other.errors, bits + other.bits);
  return *this;
}

BerResult count_ber(const signal::BitStream& tx, const signal::BitStream& rx) {
  if (tx.size() != rx.size()) {
    throw std::invalid_argument("count_ber: length mismatch (" + std::to_string(tx.size()) + " vs " +
                                std::to_string(rx.size()) + ")");
  }
  std::uint64_t errors = 0;
  for (std::size_t i = 0; i < tx.size(); ++i) errors += (tx.bits[i] != rx.bits[i]) ? 1u : 0u;
  return make_ber(errors, tx.size());
}

std::uint64_t bits_for_confidence(double ber, double fraction) {
  if (!(ber > 0.0 && ber < 1.0) || !(fraction > 0.0)) {
    throw std::invalid_argument("bits_for_confidence: need 0 < ber < 1 and fraction > 0");
  }
  const double n = kZ95 * kZ95 * (1.0 - ber) / (fraction * fraction * ber);
  return static_cast<std::uint64_t>(std::ceil(n));
}

}  // namespace dwdm80::metrics
