#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dwdm80 {

// Precondition violations (bad sizes, out-of-range parameters) are reported
// as std::invalid_argument. Model failures that a sweep may want to catch and
// record derive from ModelError.

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyncFailed : public ModelError {
 public:
  SyncFailed(double peak, double floor)
      : ModelError("sync-failed: correlation peak " + std::to_string(peak) +
                   " below floor " + std::to_string(floor)),
        peak_(peak) {}
  double peak() const noexcept { return peak_; }

 private:
  double peak_;
};

class DeadSubcarrier : public ModelError {
 public:
  explicit DeadSubcarrier(std::size_t index)
      : ModelError("dead-subcarrier: zero channel estimate on loaded subcarrier " +
                   std::to_string(index)),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class RateInfeasible : public ModelError {
 public:
  RateInfeasible(int requested_bits, int max_bits)
      : ModelError("rate-infeasible: requested " + std::to_string(requested_bits) +
                   " bits/frame, max achievable " + std::to_string(max_bits)),
        requested_bits_(requested_bits),
        max_bits_(max_bits) {}
  int requested_bits() const noexcept { return requested_bits_; }
  int max_bits() const noexcept { return max_bits_; }

 private:
  int requested_bits_;
  int max_bits_;
};

class SingularRegression : public ModelError {
 public:
  using ModelError::ModelError;
};

class OutOfBracket : public ModelError {
 public:
  OutOfBracket(double ber_low_edge, double ber_high_edge)
      : ModelError("out-of-bracket: BER " + std::to_string(ber_low_edge) + " at low edge, " +
                   std::to_string(ber_high_edge) + " at high edge"),
        ber_low_edge_(ber_low_edge),
        ber_high_edge_(ber_high_edge) {}
  double ber_low_edge() const noexcept { return ber_low_edge_; }
  double ber_high_edge() const noexcept { return ber_high_edge_; }

 private:
  double ber_low_edge_;
  double ber_high_edge_;
};

}  // namespace dwdm80
