#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "uwmac/chirp.hpp"
#include "uwmac/sim_core.hpp"

using namespace uwmac;
using chirp::ChirpSpec;
using chirp::Direction;

namespace {

// Frequency estimate from zero crossings over a sample range.
double crossing_freq(const std::vector<double>& s, std::size_t lo, std::size_t hi,
                     double fs) {
    int crossings = 0;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        if ((s[i - 1] < 0.0) != (s[i] < 0.0)) ++crossings;
    }
    const double span = static_cast<double>(hi - lo) / fs;
    return crossings / (2.0 * span);
}

double energy(const std::vector<double>& s) {
    double e = 0.0;
    for (double v : s) e += v * v;
    return e;
}

std::vector<double> embed(const std::vector<double>& tmpl, std::size_t offset,
                          std::size_t total) {
    std::vector<double> sig(total, 0.0);
    for (std::size_t i = 0; i < tmpl.size(); ++i) sig[offset + i] += tmpl[i];
    return sig;
}

}  // namespace

TEST_CASE("default preamble: 1920 samples starting at cos(0)=1") {
    const ChirpSpec spec;
    const auto s = gen_chirp(spec);
    REQUIRE(s.size() == 1920);
    CHECK(s[0] == doctest::Approx(1.0));
}

TEST_CASE("instantaneous frequency sweeps start->start+bandwidth") {
    const ChirpSpec spec;
    const auto up = gen_chirp(spec);
    // Average frequency over the first/last 10% should straddle the sweep.
    const double f_head = crossing_freq(up, 0, 192, spec.sample_rate_hz);
    const double f_tail = crossing_freq(up, up.size() - 192, up.size(), spec.sample_rate_hz);
    CHECK(f_head == doctest::Approx(6300.0).epsilon(0.05));
    CHECK(f_tail == doctest::Approx(11700.0).epsilon(0.05));

    ChirpSpec down = spec;
    down.direction = Direction::down;
    const auto dn = gen_chirp(down);
    const double d_head = crossing_freq(dn, 0, 192, spec.sample_rate_hz);
    const double d_tail = crossing_freq(dn, dn.size() - 192, dn.size(), spec.sample_rate_hz);
    CHECK(d_head == doctest::Approx(11700.0).epsilon(0.05));
    CHECK(d_tail == doctest::Approx(6300.0).epsilon(0.05));
}

TEST_CASE("up and down chirps of the same spec carry equal energy") {
    ChirpSpec spec;
    const auto up = gen_chirp(spec);
    spec.direction = Direction::down;
    const auto dn = gen_chirp(spec);
    CHECK(energy(up) == doctest::Approx(energy(dn)).epsilon(1e-6));
}

TEST_CASE("clean embedded chirp produces a single peak at the offset") {
    const ChirpSpec spec;
    const auto tmpl = gen_chirp(spec);
    const std::size_t offset = 777;
    const auto sig = embed(tmpl, offset, 4096);
    const auto report = chirp::detect_preambles(sig, tmpl, 0.5);
    REQUIRE(report.peak_times.size() == 1);
    CHECK(std::llabs(report.peak_times[0] - static_cast<std::int64_t>(offset)) <= 1);
    CHECK(report.peak_scores[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("two chirps separated by at least one template length both report") {
    const ChirpSpec spec;
    const auto tmpl = gen_chirp(spec);
    std::vector<double> sig(8192, 0.0);
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        sig[100 + i] += tmpl[i];
        sig[100 + 2500 + i] += tmpl[i];
    }
    const auto report = chirp::detect_preambles(sig, tmpl, 0.5);
    REQUIRE(report.peak_times.size() == 2);
    CHECK(std::llabs(report.peak_times[0] - 100) <= 1);
    CHECK(std::llabs(report.peak_times[1] - 2600) <= 1);
    // Strictly increasing times.
    CHECK(report.peak_times[0] < report.peak_times[1]);
}

TEST_CASE("amplitude invariance of the normalized report") {
    const ChirpSpec spec;
    const auto tmpl = gen_chirp(spec);
    sim::RngStream rng(3, 0);
    std::vector<double> sig(4096);
    for (auto& v : sig) v = rng.normal(0.0, 0.2);
    for (std::size_t i = 0; i < tmpl.size(); ++i) sig[900 + i] += tmpl[i];

    const auto base = chirp::detect_preambles(sig, tmpl, 0.4);
    std::vector<double> scaled = sig;
    for (auto& v : scaled) v *= 8.0;  // power of two: exact
    const auto rep2 = chirp::detect_preambles(scaled, tmpl, 0.4);
    CHECK(base.peak_times == rep2.peak_times);
    REQUIRE(base.peak_scores.size() == rep2.peak_scores.size());
    for (std::size_t i = 0; i < base.peak_scores.size(); ++i) {
        CHECK(base.peak_scores[i] == rep2.peak_scores[i]);
    }

    std::vector<double> odd = sig;
    for (auto& v : odd) v *= 3.7;
    const auto rep3 = chirp::detect_preambles(odd, tmpl, 0.4);
    CHECK(base.peak_times == rep3.peak_times);
}

TEST_CASE("time-shift equivariance") {
    const ChirpSpec spec;
    const auto tmpl = gen_chirp(spec);
    sim::RngStream rng(17, 0);
    std::vector<double> noise(6000);
    for (auto& v : noise) v = rng.normal(0.0, 0.1);

    const std::size_t shift = 321;
    std::vector<double> a(noise.size() + shift, 0.0);
    std::vector<double> b(noise.size() + shift, 0.0);
    for (std::size_t i = 0; i < noise.size(); ++i) {
        a[i] = noise[i];
        b[i + shift] = noise[i];  // whole waveform shifted
    }
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        a[1000 + i] += tmpl[i];
        b[1000 + shift + i] += tmpl[i];
    }
    const auto ra = chirp::detect_preambles(a, tmpl, 0.4);
    const auto rb = chirp::detect_preambles(b, tmpl, 0.4);
    REQUIRE(ra.peak_times.size() == 1);
    REQUIRE(rb.peak_times.size() == 1);
    CHECK(rb.peak_times[0] - ra.peak_times[0] == static_cast<std::int64_t>(shift));
}

TEST_CASE("collision predicate on synthetic reports") {
    const double fs = 48000.0;
    chirp::DetectionReport r;
    r.peak_times = {0, static_cast<std::int64_t>(2.0 * fs)};
    r.peak_scores = {0.9, 0.8};
    CHECK(chirp::classify_collision(r, 5.36, fs));
    r.peak_times[1] = static_cast<std::int64_t>(6.0 * fs);
    CHECK_FALSE(chirp::classify_collision(r, 5.36, fs));
    chirp::DetectionReport single;
    single.peak_times = {100};
    single.peak_scores = {0.9};
    CHECK_FALSE(chirp::classify_collision(single, 5.36, fs));
}

TEST_CASE("collision predicate straddles the duration boundary exactly") {
    const double fs = 48000.0;
    const double dur = 0.2;  // short packet keeps the scan cheap
    const auto bound = static_cast<std::int64_t>(dur * fs);
    for (std::int64_t delta : {-480L, -1L, 0L, 1L, 480L}) {
        chirp::DetectionReport r;
        r.peak_times = {0, bound + delta};
        r.peak_scores = {1.0, 1.0};
        CHECK(chirp::classify_collision(r, dur, fs) == (delta < 0));
    }
}

TEST_CASE("end-to-end: overlapping chirps detected and classified") {
    const ChirpSpec spec;
    const auto tmpl = gen_chirp(spec);
    const double fs = spec.sample_rate_hz;
    const double first_duration = 0.2;  // 9600 samples

    // Second preamble 0.1 s in: inside the first packet -> collision.
    std::vector<double> sig(16000, 0.0);
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        sig[500 + i] += tmpl[i];
        sig[500 + 4800 + i] += tmpl[i];
    }
    auto report = chirp::detect_preambles(sig, tmpl, 0.4);
    REQUIRE(report.peak_times.size() == 2);
    CHECK(chirp::classify_collision(report, first_duration, fs));

    // Second preamble 0.3 s in: after the first packet ends -> no collision.
    std::vector<double> sig2(20000, 0.0);
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        sig2[500 + i] += tmpl[i];
        sig2[500 + 14400 + i] += tmpl[i];
    }
    report = chirp::detect_preambles(sig2, tmpl, 0.4);
    REQUIRE(report.peak_times.size() == 2);
    CHECK_FALSE(chirp::classify_collision(report, first_duration, fs));
}

TEST_CASE("Monte-Carlo smoke: high SNR detects, noise floor stays silent") {
    const ChirpSpec spec;
    chirp::CurveOptions opts;
    opts.trials = 300;
    const std::vector<double> grid{10.0};
    const auto curve = chirp::detection_curve_serial(spec, grid, opts);
    CHECK(curve[0].probability == doctest::Approx(1.0));

    const double fa = chirp::false_alarm_rate_serial(spec, 300, 4096);
    CHECK(fa == doctest::Approx(0.0));
}

TEST_CASE("parallel Monte-Carlo kernels reproduce the serial reference exactly") {
    const ChirpSpec spec;
    chirp::CurveOptions opts;
    opts.trials = 200;
    opts.seed = 99;
    const std::vector<double> grid{-16.0, -12.0, 0.0};
    const auto serial = chirp::detection_curve_serial(spec, grid, opts);
    const auto parallel = chirp::detection_curve(spec, grid, opts);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].probability == parallel[i].probability);
        CHECK(serial[i].trials == parallel[i].trials);
    }
    CHECK(chirp::false_alarm_rate_serial(spec, 200, 4000, 0.2, 7) ==
          chirp::false_alarm_rate(spec, 200, 4000, 0.2, 7));
}

TEST_CASE("detection probability rises with SNR (smoke grid)") {
    const ChirpSpec spec;
    chirp::CurveOptions opts;
    opts.trials = 400;
    const std::vector<double> grid{-20.0, -14.0, -9.0};
    const auto curve = chirp::detection_curve_serial(spec, grid, opts);
    CHECK(curve[0].probability < 0.5);
    CHECK(curve[2].probability > 0.9);
    CHECK(curve[2].probability >= curve[1].probability);
}

TEST_CASE("overlapped scenario keeps detecting at low SIR") {
    const ChirpSpec spec;
    chirp::CurveOptions opts;
    opts.trials = 200;
    opts.overlapped = true;
    opts.sir_db = -5.0;  // interferer 5 dB stronger than the chirp
    const std::vector<double> grid{10.0};
    const auto curve = chirp::detection_curve_serial(spec, grid, opts);
    CHECK(curve[0].probability > 0.95);
}
