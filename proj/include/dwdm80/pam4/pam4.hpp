#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dwdm80/channel/noise.hpp"
#include "dwdm80/pam4/ffe.hpp"
#include "dwdm80/signal/filter.hpp"
#include "dwdm80/signal/prbs.hpp"
#include "dwdm80/signal/waveform.hpp"

namespace dwdm80::pam4 {

enum class LevelSpacing { equidistant_field, equidistant_power };

/// PAM4 level rule plus the fixed Gray labeling 00->L0, 01->L1, 11->L2, 10->L3.
struct PamScheme {
  LevelSpacing spacing = LevelSpacing::equidistant_power;

  /// Field amplitudes of L0..L3 for peak amplitude 1.
  std::array<double, 4> field_levels() const;
  /// Detected intensities |a_i|^2 scaled to unit mean over equiprobable levels.
  std::array<double, 4> intensity_levels() const;
};

/// Level index (0..3) carried by a bit pair under the Gray labeling.
int gray_level(std::uint8_t b0, std::uint8_t b1);
/// Bit pair for a level index.
std::array<std::uint8_t, 2> gray_bits(int level);

/// Bit pairs to level indices. Odd bit counts are rejected.
std::vector<int> pam4_symbols(const signal::BitStream& bits);
signal::BitStream pam4_demap(std::span<const int> levels);

/// Bit pairs to field amplitudes (peak amplitude A).
RealVector pam4_map(const signal::BitStream& bits, const PamScheme& scheme, double amplitude = 1.0);

/// NRZ pulses at `baud`, optional TX filter on the electrical drive, ideal
/// chirp-free modulator (field = drive, negatives clamped to 0), mean optical
/// power normalized to 1 mW. Sample rate is baud * samples_per_symbol.
signal::Waveform pam4_modulate(std::span<const double> field_symbols, double baud,
                               std::size_t samples_per_symbol,
                               const std::optional<signal::FilterSpec>& tx_filter);

enum class ThresholdMode {
  midpoint,     // halfway between trained level means
  gaussian_ml,  // intersection of Gaussians fitted to trained levels
  min_error,    // minimizes decision errors on the training symbols
};

struct Pam4RxConfig {
  PamScheme scheme;
  double baud = 56e9;
  std::optional<signal::FilterSpec> rx_filter;
  std::optional<FfeConfig> ffe;
  ThresholdMode thresholds = ThresholdMode::midpoint;
  std::size_t training_symbols = 2000;
  double sync_floor = 0.2;  // minimum normalized correlation at the sync peak
};

struct Pam4Diagnostics {
  std::array<double, 4> level_means{};
  std::array<double, 4> level_sigmas{};
  std::array<double, 3> thresholds{};
  double mse = 0.0;  // training MSE against the ideal intensity levels
  RealVector taps;
  std::size_t sample_offset = 0;
  double sync_peak = 0.0;
};

struct Pam4RxResult {
  std::vector<int> levels;  // decided level per transmitted symbol index
  signal::BitStream bits;   // Gray-demapped, aligned with the transmitted bits
  Pam4Diagnostics diagnostics;
};

/// Electrical receive chain on a detected record: RX filter, integer timing
/// by cross-correlation with the training symbols, downsampling at the phase
/// with the lowest training MSE, optional FFE, threshold decisions, Gray
/// demapping. known_levels holds the transmitted level indices; its first
/// training_symbols entries are treated as known training.
Pam4RxResult pam4_receive(const signal::RealSignal& detected, std::span<const int> known_levels,
                          const Pam4RxConfig& cfg);

/// Same chain starting from the optical field (photodetection first).
Pam4RxResult pam4_receive(const channel::ReceivedField& field, std::span<const int> known_levels,
                          const Pam4RxConfig& cfg);

/// Decision thresholds between adjacent levels for each mode.
std::array<double, 3> decision_thresholds(std::span<const double> samples,
                                          std::span<const int> levels, ThresholdMode mode,
                                          std::array<double, 4>* means = nullptr,
                                          std::array<double, 4>* sigmas = nullptr);

/// Threshold between two Gaussians where the weighted densities cross,
/// restricted to [m1, m2]; the midpoint when variances are equal.
double gaussian_crossing(double m1, double s1, double m2, double s2);

}  // namespace dwdm80::pam4
