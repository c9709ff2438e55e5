#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dwdm80::signal {

struct BitStream {
  std::vector<std::uint8_t> bits;  // each 0 or 1
  std::string origin;

  std::size_t size() const noexcept { return bits.size(); }
};

/// First n bits of the maximal-length Fibonacci LFSR sequence for
/// PRBS7 (x^7+x^6+1), PRBS15 (x^15+x^14+1), PRBS23 (x^23+x^18+1) or
/// PRBS31 (x^31+x^28+1). The register holds `order` bits; each step emits
/// the feedback bit and shifts it in. A seed of 0 locks the register and
/// is rejected; only the low `order` bits of the seed are used.
BitStream prbs_generate(int order, std::uint64_t seed, std::size_t n);

/// Seed with all `order` register bits set.
std::uint64_t prbs_all_ones(int order);

/// Independent uniformly random bits (payload data when a PRBS period would
/// be too short or too correlated between channels).
BitStream random_bits(std::uint64_t seed, std::size_t n);

}  // namespace dwdm80::signal
