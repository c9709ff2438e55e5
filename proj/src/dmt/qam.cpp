#include "dwdm80/dmt/qam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dwdm80::dmt {
namespace {

struct Axis {
  int levels;
  double scale;  // amplitude of unit step (distance between levels / 2)
};

Axis axis_for(int n_bits) {
  if (!valid_qam_bits(n_bits)) throw std::invalid_argument("qam: bits must be 2, 4, 6 or 8");
  const int l = 1 << (n_bits / 2);
  const double energy = 2.0 * (l * l - 1) / 3.0;
  return {l, 1.0 / std::sqrt(energy)};
}

int gray_decode(int g) {
  int i = 0;
  for (; g != 0; g >>= 1) i ^= g;
  return i;
}

int decide_index(double x, const Axis& a) {
  const double pos = (x / a.scale + (a.levels - 1)) / 2.0;
  return std::clamp(static_cast<int>(std::lround(pos)), 0, a.levels - 1);
}

}  // namespace

bool valid_qam_bits(int bits) noexcept { return bits == 2 || bits == 4 || bits == 6 || bits == 8; }

Complex qam_map(const std::uint8_t* bits, int n_bits) {
  const Axis a = axis_for(n_bits);
  const int half = n_bits / 2;
  int gi = 0;
  int gq = 0;
  for (int b = 0; b < half; ++b) gi = (gi << 1) | (bits[b] & 1);
  for (int b = 0; b < half; ++b) gq = (gq << 1) | (bits[half + b] & 1);
  const int ii = gray_decode(gi);
  const int iq = gray_decode(gq);
  return {a.scale * (2 * ii - (a.levels - 1)), a.scale * (2 * iq - (a.levels - 1))};
}

void qam_demap(Complex z, int n_bits, std::uint8_t* out) {
  const Axis a = axis_for(n_bits);
  const int half = n_bits / 2;
  const int ii = decide_index(z.real(), a);
  const int iq = decide_index(z.imag(), a);
  const int gi = ii ^ (ii >> 1);
  const int gq = iq ^ (iq >> 1);
  for (int b = 0; b < half; ++b) {
    out[b] = static_cast<std::uint8_t>((gi >> (half - 1 - b)) & 1);
    out[half + b] = static_cast<std::uint8_t>((gq >> (half - 1 - b)) & 1);
  }
}

Complex qam_decide(Complex z, int n_bits) {
  const Axis a = axis_for(n_bits);
  const int ii = decide_index(z.real(), a);
  const int iq = decide_index(z.imag(), a);
  return {a.scale * (2 * ii - (a.levels - 1)), a.scale * (2 * iq - (a.levels - 1))};
}

}  // namespace dwdm80::dmt
