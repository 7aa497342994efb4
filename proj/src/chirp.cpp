#include "uwmac/chirp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "uwmac/sim_core.hpp"

namespace uwmac::chirp {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

int ChirpSpec::sample_count() const {
    const int n = static_cast<int>(std::lround(duration_s * sample_rate_hz));
    if (n <= 0) {
        throw std::domain_error("ChirpSpec: duration * sample_rate must be positive");
    }
    return n;
}

std::vector<double> gen_chirp(const ChirpSpec& spec) {
    if (!(spec.bandwidth_hz > 0.0) || !(spec.duration_s > 0.0) ||
        !(spec.sample_rate_hz > 0.0) || !(spec.start_frequency_hz >= 0.0)) {
        throw std::domain_error("gen_chirp: invalid chirp parameters");
    }
    const int n = spec.sample_count();
    const double rate = spec.bandwidth_hz / spec.duration_s;
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = i / spec.sample_rate_hz;
        double phase;
        if (spec.direction == Direction::up) {
            phase = 2.0 * kPi * spec.start_frequency_hz * t + kPi * rate * t * t;
        } else {
            phase = 2.0 * kPi * (spec.start_frequency_hz + spec.bandwidth_hz) * t -
                    kPi * rate * t * t;
        }
        out[static_cast<std::size_t>(i)] = std::cos(phase);
    }
    return out;
}

namespace {

// Dot product with a fixed four-way summation tree: fast enough to vectorize
// and bit-reproducible regardless of optimization level.
double dot4(const double* a, const double* b, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

}  // namespace

DetectionReport detect_preambles(std::span<const double> signal,
                                 std::span<const double> tmpl,
                                 double threshold) {
    const std::size_t n = signal.size();
    const std::size_t m = tmpl.size();
    if (m == 0 || n < m) {
        throw std::invalid_argument("detect_preambles: signal shorter than template");
    }
    const double tmpl_energy = std::sqrt(dot4(tmpl.data(), tmpl.data(), m));
    if (!(tmpl_energy > 0.0)) {
        throw std::invalid_argument("detect_preambles: zero-energy template");
    }

    const std::size_t lags = n - m + 1;
    // Prefix sums of signal^2 give the window energy at each lag in O(1).
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + signal[i] * signal[i];

    std::vector<double> score(lags, 0.0);
    for (std::size_t k = 0; k < lags; ++k) {
        const double win_energy = prefix[k + m] - prefix[k];
        if (win_energy <= 0.0) continue;
        const double corr = dot4(signal.data() + k, tmpl.data(), m);
        score[k] = corr / (tmpl_energy * std::sqrt(win_energy));
    }

    DetectionReport report;
    const auto is_local_max = [&](std::size_t k) {
        const bool left_ok = (k == 0) || score[k] >= score[k - 1];
        const bool right_ok = (k + 1 >= lags) || score[k] >= score[k + 1];
        return left_ok && right_ok;
    };
    const std::int64_t min_sep = static_cast<std::int64_t>(m);
    for (std::size_t k = 0; k < lags; ++k) {
        if (score[k] <= threshold || !is_local_max(k)) continue;
        const auto t = static_cast<std::int64_t>(k);
        if (!report.peak_times.empty() && t - report.peak_times.back() < min_sep) {
            // Same lobe as the previous peak: keep the stronger one.
            if (score[k] > report.peak_scores.back()) {
                report.peak_times.back() = t;
                report.peak_scores.back() = score[k];
            }
            continue;
        }
        report.peak_times.push_back(t);
        report.peak_scores.push_back(score[k]);
    }
    return report;
}

bool classify_collision(DetectionReport& report,
                        double first_packet_duration_s,
                        double sample_rate_hz) {
    report.collision = false;
    if (report.peak_times.size() >= 2) {
        const double gap_s =
            static_cast<double>(report.peak_times[1] - report.peak_times[0]) /
            sample_rate_hz;
        report.collision = gap_s < first_packet_duration_s;
    }
    return report.collision;
}

namespace {

struct TrialContext {
    const std::vector<double>* tmpl;
    double signal_power;  // mean square of the chirp
    CurveOptions opts;
};

// One Monte-Carlo trial; fully determined by (seed, point index, trial index).
bool run_trial(const TrialContext& ctx, std::size_t point, int trial, double snr_db) {
    sim::RngStream rng(ctx.opts.seed,
                       (static_cast<std::uint64_t>(point) << 32) |
                           static_cast<std::uint64_t>(trial));
    const auto& tmpl = *ctx.tmpl;
    const int n = static_cast<int>(tmpl.size());
    const int margin = ctx.opts.margin_samples;
    const int len = n + 2 * margin;

    const double noise_sd = std::sqrt(ctx.signal_power * std::pow(10.0, -snr_db / 10.0));
    const int offset = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(2 * margin)));

    std::vector<double> sig(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) sig[static_cast<std::size_t>(i)] = rng.normal(0.0, noise_sd);
    if (ctx.opts.overlapped) {
        // Payload-like interferer across the whole window at the given SIR.
        const double isd = std::sqrt(ctx.signal_power * std::pow(10.0, -ctx.opts.sir_db / 10.0));
        for (int i = 0; i < len; ++i) sig[static_cast<std::size_t>(i)] += rng.normal(0.0, isd);
    }
    for (int i = 0; i < n; ++i) sig[static_cast<std::size_t>(offset + i)] += tmpl[static_cast<std::size_t>(i)];

    const DetectionReport report = detect_preambles(sig, tmpl, ctx.opts.threshold);
    for (std::int64_t t : report.peak_times) {
        if (std::llabs(t - offset) <= ctx.opts.tolerance_samples) return true;
    }
    return false;
}

std::vector<CurvePoint> curve_impl(const ChirpSpec& spec,
                                   std::span<const double> snr_grid_db,
                                   const CurveOptions& opts, bool parallel) {
    if (opts.trials < 100) {
        throw std::invalid_argument("detection_curve: at least 100 trials required");
    }
    ChirpSpec up = spec;
    up.direction = Direction::up;
    const std::vector<double> tmpl = gen_chirp(up);
    double power = 0.0;
    for (double v : tmpl) power += v * v;
    power /= static_cast<double>(tmpl.size());

    TrialContext ctx{&tmpl, power, opts};
    std::vector<CurvePoint> out(snr_grid_db.size());
    for (std::size_t p = 0; p < snr_grid_db.size(); ++p) {
        const double snr = snr_grid_db[p];
        long hits = 0;
        if (parallel) {
#pragma omp parallel for schedule(static) reduction(+ : hits)
            for (int t = 0; t < opts.trials; ++t) {
                hits += run_trial(ctx, p, t, snr) ? 1 : 0;
            }
        } else {
            for (int t = 0; t < opts.trials; ++t) {
                hits += run_trial(ctx, p, t, snr) ? 1 : 0;
            }
        }
        out[p] = CurvePoint{snr, static_cast<double>(hits) / opts.trials, opts.trials};
    }
    return out;
}

double false_alarm_impl(const ChirpSpec& spec, int trials, int window_samples,
                        double threshold, std::uint64_t seed, bool parallel) {
    ChirpSpec up = spec;
    up.direction = Direction::up;
    const std::vector<double> tmpl = gen_chirp(up);
    if (window_samples < static_cast<int>(tmpl.size())) {
        throw std::invalid_argument("false_alarm_rate: window shorter than template");
    }
    long alarms = 0;
    const auto trial = [&](int t) {
        sim::RngStream rng(seed, 0x46410000ULL + static_cast<std::uint64_t>(t));
        std::vector<double> sig(static_cast<std::size_t>(window_samples));
        for (auto& v : sig) v = rng.normal(0.0, 1.0);
        return !detect_preambles(sig, tmpl, threshold).peak_times.empty();
    };
    if (parallel) {
#pragma omp parallel for schedule(static) reduction(+ : alarms)
        for (int t = 0; t < trials; ++t) alarms += trial(t) ? 1 : 0;
    } else {
        for (int t = 0; t < trials; ++t) alarms += trial(t) ? 1 : 0;
    }
    return static_cast<double>(alarms) / trials;
}

}  // namespace

std::vector<CurvePoint> detection_curve_serial(const ChirpSpec& spec,
                                               std::span<const double> snr_grid_db,
                                               const CurveOptions& opts) {
    return curve_impl(spec, snr_grid_db, opts, false);
}

std::vector<CurvePoint> detection_curve(const ChirpSpec& spec,
                                        std::span<const double> snr_grid_db,
                                        const CurveOptions& opts) {
    return curve_impl(spec, snr_grid_db, opts, true);
}

double false_alarm_rate_serial(const ChirpSpec& spec, int trials, int window_samples,
                               double threshold, std::uint64_t seed) {
    return false_alarm_impl(spec, trials, window_samples, threshold, seed, false);
}

double false_alarm_rate(const ChirpSpec& spec, int trials, int window_samples,
                        double threshold, std::uint64_t seed) {
    return false_alarm_impl(spec, trials, window_samples, threshold, seed, true);
}

}  // namespace uwmac::chirp
