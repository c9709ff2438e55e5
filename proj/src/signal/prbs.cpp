#include "dwdm80/signal/prbs.hpp"

#include <random>
#include <stdexcept>

namespace dwdm80::signal {
namespace {

int second_tap(int order) {
  switch (order) {
    case 7: return 6;
    case 15: return 14;
    case 23: return 18;
    case 31: return 28;
    default: throw std::invalid_argument("prbs: order must be one of 7, 15, 23, 31");
  }
}

}  // namespace

std::uint64_t prbs_all_ones(int order) {
  second_tap(order);
  return (std::uint64_t{1} << order) - 1;
}

BitStream prbs_generate(int order, std::uint64_t seed, std::size_t n) {
  const int tap = second_tap(order);
  const std::uint64_t mask = (std::uint64_t{1} << order) - 1;
  std::uint64_t state = seed & mask;
  if (state == 0) throw std::invalid_argument("prbs: seed must be nonzero");

  BitStream out;
  out.origin = "prbs" + std::to_string(order) + ":seed=" + std::to_string(state);
  out.bits.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto fb = static_cast<std::uint8_t>(((state >> (order - 1)) ^ (state >> (tap - 1))) & 1U);
    state = ((state << 1) | fb) & mask;
    out.bits[i] = fb;
  }
  return out;
}

BitStream random_bits(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  BitStream out;
  out.origin = "random:seed=" + std::to_string(seed);
  out.bits.resize(n);
  std::size_t i = 0;
  while (i < n) {
    std::uint64_t word = rng();
    for (int b = 0; b < 64 && i < n; ++b, ++i) {
      out.bits[i] = static_cast<std::uint8_t>((word >> b) & 1U);
    }
  }
  return out;
}

}  // namespace dwdm80::signal
