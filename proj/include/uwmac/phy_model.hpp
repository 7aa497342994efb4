#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

namespace uwmac::phy {

/**
 * One transmission mode: constellation, frequency-diversity order and
 * convolutional coding rate, with the advertised net data rate.
 *
 * The coding rate is kept as an exact fraction so bits-per-frame arithmetic
 * stays integer-exact (768 * 2 / 3 must be 512, not 511.999...).
 */
struct TransmissionMode {
    int index = 1;            // 1..6
    int bits_per_symbol = 1;  // 1 = BPSK, 2 = QPSK, 3 = 8PSK
    int diversity_order = 1;  // M
    int code_num = 1;
    int code_den = 2;
    double data_rate_bps = 658.0;
    std::string modulation = "BPSK";

    double coding_rate() const { return static_cast<double>(code_num) / code_den; }
};

// The six-mode catalog (BPSK/QPSK/8PSK x diversity x rate); index 1..6,
// data rate strictly increasing.
const std::vector<TransmissionMode>& mode_table();

/**
 * OFDM packet and frame timing. A packet is preamble + header + N frames,
 * each frame being a sync/guard overhead followed by five CP-OFDM blocks.
 *
 * header_duration_s and frame_overhead_s are calibration constants: with the
 * defaults below, a 400-byte payload at mode 1 lasts exactly 5.36 s.
 */
struct OfdmTiming {
    double symbol_duration_s = 0.1707;
    double cp_duration_s = 0.020;
    int blocks_per_frame = 5;
    int data_carriers = 768;
    int pilot_carriers = 257;
    int subcarriers = 1025;
    double preamble_duration_s = 0.040;
    double header_duration_s = 0.48;
    double frame_overhead_s = 0.0145;

    double block_duration_s() const { return symbol_duration_s + cp_duration_s; }
};

// ESNR boundaries partitioning the real line into modes 0..6. Intervals are
// left-open right-closed: mode m covers (edge[m-1], edge[m]].
struct ModeThresholds {
    std::array<double, 6> upper_edges{-1.0, 1.8, 4.8, 6.8, 9.0, 13.0};
};

// Maps an ESNR value to the mode whose interval contains it (0 = channel too
// harsh to transmit). Boundary values belong to the lower mode.
int select_mode(double esnr_db, const ModeThresholds& thresholds = {});

// Payload bits carried by one frame of a given mode.
double bits_per_frame(const TransmissionMode& mode, const OfdmTiming& timing);

// Raw per-block information rate implied by the carrier/coding parameters,
// before any frame-level overhead.
double raw_rate(const TransmissionMode& mode, const OfdmTiming& timing);

// On-air duration of a data packet: preamble + header + ceil(payload /
// frame capacity) frames.
double packet_duration(const TransmissionMode& mode, int payload_bytes,
                       const OfdmTiming& timing);
double packet_duration(int mode_index, int payload_bytes, const OfdmTiming& timing);

/**
 * Effective SNR over the data subcarriers:
 *   10 log10( mean |H[k] s[k]|^2 / mean |z[k] - H[k] s[k]|^2 )
 * A zero (or tiny) residual is capped at cap_db.
 */
double compute_esnr(std::span<const std::complex<double>> h_hat,
                    std::span<const std::complex<double>> z,
                    std::span<const std::complex<double>> s,
                    double cap_db = 60.0);

/**
 * Parametric packet-error-rate model. Each mode is anchored at PER = 10^-target
 * at its lower ESNR threshold, with a waterfall of `slope_decades_per_db`
 * decades of PER per dB below/above the anchor:
 *   PER = min(1, 10^(-target - slope * (esnr - anchor_m)))
 */
struct PerModel {
    double target_exponent = 2.0;
    double slope_decades_per_db = 2.0;
};

double per_model(int mode_index, double esnr_db, const PerModel& model = {},
                 const ModeThresholds& thresholds = {});

}  // namespace uwmac::phy
