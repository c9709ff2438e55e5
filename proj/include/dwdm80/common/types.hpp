#pragma once

#include <complex>
#include <vector>

namespace dwdm80 {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
// OSNR reference bandwidth (0.1 nm at 1550 nm).
inline constexpr double kOsnrReferenceBandwidth = 12.5e9;

}  // namespace dwdm80
