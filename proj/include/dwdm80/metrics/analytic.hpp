#pragma once

#include "dwdm80/pam4/pam4.hpp"

namespace dwdm80::metrics {

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_func(double x);

/// Inverse of q_func on 0 < p < 1 (q_inv(0.5) = 0).
double q_inv(double p);

/// Gray-coded square M-QAM on AWGN, symbol SNR Es/N0 (linear):
/// (4/log2 M)(1 - 1/sqrt M) Q(sqrt(3 snr / (M - 1))). M in {4, 16, 64, 256}.
double ber_mqam_awgn(int m, double snr);

/// SNR = OSNR * 2 B_ref / (p B), B_ref = 12.5 GHz.
double osnr_to_snr(double osnr_db, double bandwidth_hz, int polarizations);
/// Inverse of osnr_to_snr, in dB.
double snr_to_osnr_db(double snr, double bandwidth_hz, int polarizations);

/// SNR gap at a target BER, anchored on QPSK: Qinv(2 ber)^2 / 3 (linear).
/// Accepts 0 < target_ber < 0.1.
double gap_from_ber(double target_ber);

/// Gaussian beat-noise model of a PAM4 direct-detection receiver with a
/// rectangular optical filter of width optical_bw and an electrical filter of
/// width electrical_bw. Per-level variance 4 P_i rho B_e + 2 rho^2 B_o B_e,
/// thresholds at the Gaussian crossings, Gray weighting (one bit per
/// adjacent-level error). Mean signal power 1 mW.
double pam4_dd_ber_semianalytic(double osnr_db, const pam4::PamScheme& scheme, double optical_bw,
                                double electrical_bw);

/// OSNR (dB) at which pam4_dd_ber_semianalytic reaches target_ber, by
/// bisection on [5, 50] dB to 1e-3 dB.
double pam4_required_osnr_semianalytic(double target_ber, const pam4::PamScheme& scheme,
                                       double optical_bw, double electrical_bw);

/// OSNR (dB) at which square M-QAM on a signal of bandwidth B with p
/// polarizations reaches target_ber.
double mqam_required_osnr(int m, double target_ber, double bandwidth_hz, int polarizations);

}  // namespace dwdm80::metrics
