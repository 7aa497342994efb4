#pragma once

namespace uwmac::acoustics {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double distance(Vec2 a, Vec2 b);

// Parameters of the passive sonar budget for one link.
struct LinkBudgetParams {
    double transmit_power_w = 2.0;
    double noise_level_db = 100.0;     // dB re 1 uPa over the signal band
    double center_frequency_khz = 9.0;
    double sound_speed_mps = 1500.0;
    double spreading_exponent = 20.0;  // 20 = spherical, 10 = cylindrical
};

// SL = 10 log10(P) + 170.77, dB re 1 uPa at 1 m. Throws std::domain_error
// for nonpositive power.
double source_level(double power_w);

// Spreading loss k*log10(r) in dB. Range below the 1 m reference distance is
// a domain error.
double spreading_loss(double range_m, double spreading_exponent = 20.0);

// Thorp seawater absorption coefficient in dB/km, f in kHz:
//   0.11 f^2/(1+f^2) + 44 f^2/(4100+f^2) + 2.75e-4 f^2 + 0.003
double thorp_absorption(double f_khz);

// Net transmission loss: spreading plus absorption over the path.
double transmission_loss(double range_m, double f_khz,
                         double spreading_exponent = 20.0);

// Passive sonar equation with zero directivity indices.
double received_snr(double sl_db, double tl_db, double nl_db);

// Straight-line acoustic travel time between two points.
double propagation_delay(Vec2 a, Vec2 b, double sound_speed_mps);

}  // namespace uwmac::acoustics
