#include "uwmac/phy_model.hpp"

#include <cmath>
#include <stdexcept>

namespace uwmac::phy {

const std::vector<TransmissionMode>& mode_table() {
    static const std::vector<TransmissionMode> table = {
        {1, 1, 3, 1, 2, 658.0, "BPSK"},
        {2, 2, 3, 1, 2, 1317.0, "QPSK"},
        {3, 2, 1, 1, 4, 1984.0, "QPSK"},
        {4, 2, 1, 1, 3, 2645.0, "QPSK"},
        {5, 2, 1, 1, 2, 3967.0, "QPSK"},
        {6, 3, 1, 1, 2, 5950.0, "8PSK"},
    };
    return table;
}

int select_mode(double esnr_db, const ModeThresholds& thresholds) {
    if (!std::isfinite(esnr_db)) {
        throw std::domain_error("select_mode: ESNR must be finite");
    }
    int mode = 0;
    for (double edge : thresholds.upper_edges) {
        if (esnr_db > edge) ++mode;
    }
    return mode;
}

double bits_per_frame(const TransmissionMode& mode, const OfdmTiming& timing) {
    // Integer numerator first so exact divisions stay exact.
    const double numer = static_cast<double>(timing.blocks_per_frame) *
                         timing.data_carriers * mode.bits_per_symbol * mode.code_num;
    return numer / (static_cast<double>(mode.code_den) * mode.diversity_order);
}

double raw_rate(const TransmissionMode& mode, const OfdmTiming& timing) {
    const double bits_per_block =
        static_cast<double>(timing.data_carriers) * mode.bits_per_symbol * mode.code_num /
        (static_cast<double>(mode.code_den) * mode.diversity_order);
    return bits_per_block / timing.block_duration_s();
}

double packet_duration(const TransmissionMode& mode, int payload_bytes,
                       const OfdmTiming& timing) {
    if (payload_bytes <= 0) {
        throw std::domain_error("packet_duration: payload must be positive");
    }
    const double payload_bits = 8.0 * payload_bytes;
    const double frames = std::ceil(payload_bits / bits_per_frame(mode, timing));
    const double frame_time =
        timing.frame_overhead_s + timing.blocks_per_frame * timing.block_duration_s();
    return timing.preamble_duration_s + timing.header_duration_s + frames * frame_time;
}

double packet_duration(int mode_index, int payload_bytes, const OfdmTiming& timing) {
    const auto& table = mode_table();
    if (mode_index < 1 || mode_index > static_cast<int>(table.size())) {
        throw std::domain_error("packet_duration: mode index out of range");
    }
    return packet_duration(table[mode_index - 1], payload_bytes, timing);
}

double compute_esnr(std::span<const std::complex<double>> h_hat,
                    std::span<const std::complex<double>> z,
                    std::span<const std::complex<double>> s,
                    double cap_db) {
    const std::size_t n = h_hat.size();
    if (n == 0 || z.size() != n || s.size() != n) {
        throw std::invalid_argument("compute_esnr: inputs must be equal-length and nonempty");
    }
    double signal = 0.0;
    double residual = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::complex<double> ref = h_hat[k] * s[k];
        signal += std::norm(ref);
        residual += std::norm(z[k] - ref);
    }
    if (residual <= 0.0) return cap_db;
    const double esnr_db = 10.0 * std::log10(signal / residual);
    return std::min(esnr_db, cap_db);
}

double per_model(int mode_index, double esnr_db, const PerModel& model,
                 const ModeThresholds& thresholds) {
    if (mode_index < 1 || mode_index > static_cast<int>(thresholds.upper_edges.size())) {
        throw std::domain_error("per_model: mode index out of range");
    }
    const double anchor = thresholds.upper_edges[mode_index - 1];
    const double exponent =
        -model.target_exponent - model.slope_decades_per_db * (esnr_db - anchor);
    if (exponent >= 0.0) return 1.0;
    return std::pow(10.0, exponent);
}

}  // namespace uwmac::phy
