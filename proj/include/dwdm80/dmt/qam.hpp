#pragma once

#include <cstdint>

#include "dwdm80/common/types.hpp"

namespace dwdm80::dmt {

// Square QAM with an even number of bits per symbol (2, 4, 6, 8), Gray
// labeled independently per axis, unit average energy. The first half of the
// bits select the in-phase level, the second half the quadrature level.

bool valid_qam_bits(int bits) noexcept;

Complex qam_map(const std::uint8_t* bits, int n_bits);

/// Hard decision on a unit-energy constellation; writes n_bits bits.
void qam_demap(Complex z, int n_bits, std::uint8_t* out);

/// Nearest constellation point (unit energy).
Complex qam_decide(Complex z, int n_bits);

}  // namespace dwdm80::dmt
