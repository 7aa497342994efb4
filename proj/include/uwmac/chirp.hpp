#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace uwmac::chirp {

enum class Direction { up, down };

// Linear FM pulse description. The default is the 40 ms, 6-12 kHz preamble
// sampled at 48 kHz (1920 samples).
struct ChirpSpec {
    double start_frequency_hz = 6000.0;
    double bandwidth_hz = 6000.0;
    double duration_s = 0.040;
    double sample_rate_hz = 48000.0;
    Direction direction = Direction::up;

    int sample_count() const;
};

// s(t) = cos(2 pi f t + pi (B/T) t^2) for the up-chirp; the down-chirp sweeps
// f+B back to f (frame-sync marker).
std::vector<double> gen_chirp(const ChirpSpec& spec);

struct DetectionReport {
    std::vector<std::int64_t> peak_times;  // sample indices, strictly increasing
    std::vector<double> peak_scores;       // normalized correlation, > threshold
    bool collision = false;                // set by classify_collision
};

// Default correlation threshold. Calibrated by Monte Carlo so that the false
// alarm probability over a full packet duration of white noise stays well
// below 1% while -9 dB chirps are still detected (see tests).
inline constexpr double kDefaultThreshold = 0.2;

/**
 * Sliding normalized cross-correlation detector.
 *
 * The score at lag k is <signal[k..], template> / (|template| * |window|),
 * so it is invariant to input amplitude. Local maxima above the threshold
 * are reported in time order, separated by at least one template length
 * (a single chirp never registers twice).
 */
DetectionReport detect_preambles(std::span<const double> signal,
                                 std::span<const double> tmpl,
                                 double threshold = kDefaultThreshold);

// Two-peak collision rule: a collision is declared iff at least two peaks
// exist and the gap between the first two is shorter than the first packet's
// duration. Marks report.collision and returns it.
bool classify_collision(DetectionReport& report,
                        double first_packet_duration_s,
                        double sample_rate_hz);

struct CurvePoint {
    double snr_db = 0.0;
    double probability = 0.0;
    int trials = 0;
};

struct CurveOptions {
    int trials = 10000;
    double threshold = kDefaultThreshold;
    bool overlapped = false;   // add a payload-like interferer
    double sir_db = 0.0;       // signal-to-interference ratio when overlapped
    std::uint64_t seed = 1;
    int margin_samples = 256;  // noise margin on each side of the chirp
    int tolerance_samples = 2; // peak position slack counted as detection
};

/**
 * Monte-Carlo detection probability versus SNR.
 *
 * Each trial embeds one chirp at a random offset into white noise scaled to
 * the grid SNR (plus, for the overlapped scenario, a noise-like interferer at
 * the configured SIR) and checks whether a peak lands at the true offset.
 * Trials use per-(point, trial) seeded streams, so the OpenMP version below
 * is sample-for-sample identical to this serial reference.
 */
std::vector<CurvePoint> detection_curve_serial(const ChirpSpec& spec,
                                               std::span<const double> snr_grid_db,
                                               const CurveOptions& opts = {});

// OpenMP-parallel version of detection_curve_serial; identical results.
std::vector<CurvePoint> detection_curve(const ChirpSpec& spec,
                                        std::span<const double> snr_grid_db,
                                        const CurveOptions& opts = {});

// Probability that noise alone produces any detection in a window of the
// given length. Serial and OpenMP versions, identical results.
double false_alarm_rate_serial(const ChirpSpec& spec, int trials, int window_samples,
                               double threshold = kDefaultThreshold,
                               std::uint64_t seed = 1);
double false_alarm_rate(const ChirpSpec& spec, int trials, int window_samples,
                        double threshold = kDefaultThreshold,
                        std::uint64_t seed = 1);

}  // namespace uwmac::chirp
