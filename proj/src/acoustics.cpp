#include "uwmac/acoustics.hpp"

#include <cmath>
#include <stdexcept>

namespace uwmac::acoustics {

double distance(Vec2 a, Vec2 b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double source_level(double power_w) {
    if (!(power_w > 0.0)) {
        throw std::domain_error("source_level: transmit power must be positive");
    }
    return 10.0 * std::log10(power_w) + 170.77;
}

double spreading_loss(double range_m, double spreading_exponent) {
    if (!(range_m >= 1.0)) {
        throw std::domain_error("spreading_loss: range below 1 m reference distance");
    }
    return spreading_exponent * std::log10(range_m);
}

double thorp_absorption(double f_khz) {
    if (!(f_khz > 0.0)) {
        throw std::domain_error("thorp_absorption: frequency must be positive");
    }
    const double f2 = f_khz * f_khz;
    return 0.11 * f2 / (1.0 + f2) + 44.0 * f2 / (4100.0 + f2) + 2.75e-4 * f2 + 0.003;
}

double transmission_loss(double range_m, double f_khz, double spreading_exponent) {
    return spreading_loss(range_m, spreading_exponent) +
           thorp_absorption(f_khz) * (range_m / 1000.0);
}

double received_snr(double sl_db, double tl_db, double nl_db) {
    return sl_db - tl_db - nl_db;
}

double propagation_delay(Vec2 a, Vec2 b, double sound_speed_mps) {
    if (!(sound_speed_mps > 0.0)) {
        throw std::domain_error("propagation_delay: sound speed must be positive");
    }
    return distance(a, b) / sound_speed_mps;
}

}  // namespace uwmac::acoustics
