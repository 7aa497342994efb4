// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Runs the full tolerance checks; the unit suites cover the same
// ground at smaller sizes.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "uwmac/acoustics.hpp"
#include "uwmac/chirp.hpp"
#include "uwmac/config.hpp"
#include "uwmac/experiments.hpp"
#include "uwmac/mac.hpp"
#include "uwmac/medium.hpp"
#include "uwmac/network_sim.hpp"
#include "uwmac/phy_model.hpp"

using namespace uwmac;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream log;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            log << "    FAILED: " << what << "\n";
        }
    }
    void note(const std::string& what) { log << "    " << what << "\n"; }
};

double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sigma_of_mean(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1) /
                     static_cast<double>(xs.size()));
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

ScenarioConfig trend_config(int nodes, double load, std::uint64_t seed = 101) {
    ScenarioConfig cfg;
    cfg.node_count = nodes;
    cfg.offered_load_pps = load;
    cfg.sim_duration_s = 2000.0;
    cfg.seed = seed;
    cfg.channel.esnr_trace = {{0.0, 20.0}};
    cfg.channel.forced_per = 0.0;
    // The initial contention window is sized to the node count, as the
    // protocol prescribes; a window tuned for 2 nodes collapses under 10.
    cfg.mac.cw_min = 3 * nodes;
    cfg.mac.cw_max = 256;
    return cfg;
}

std::vector<double> throughputs(const ScenarioConfig& cfg, int reps, double t_ref) {
    std::vector<double> out;
    for (const auto& m : run_replications(cfg, reps)) {
        out.push_back(normalized_throughput(m, t_ref));
    }
    return out;
}

// ---------------------------------------------------------------------------

bool criterion_1(Check& c) {
    c.expect(std::abs(acoustics::source_level(2.0) - 173.78) <= 0.01,
             "source_level(2 W) within 0.01 of 173.78");
    c.expect(std::abs(acoustics::spreading_loss(1000.0) - 60.0) < 1e-12,
             "spreading_loss(1000 m) = 60 exactly");
    c.expect(std::abs(acoustics::received_snr(173.77, 68.43, 100.0) - 5.34) <= 0.01,
             "received_snr at NL 100 = 5.34");
    c.expect(std::abs(acoustics::received_snr(173.77, 68.43, 80.0) - 25.34) <= 0.01,
             "received_snr at NL 80 = 25.34");
    c.note("SL(2W)=" + fmt(acoustics::source_level(2.0)) +
           " TL1(1km)=" + fmt(acoustics::spreading_loss(1000.0)));
    return c.ok;
}

bool criterion_2(Check& c) {
    // Independent oracle: the absorption formula evaluated term by term.
    const auto oracle = [](double f) {
        const double f2 = f * f;
        return 0.11 * f2 / (1.0 + f2) + 44.0 * f2 / (4100.0 + f2) + 2.75e-4 * f2 + 0.003;
    };
    // Frozen hand evaluations.
    const double at1 = 0.0690040905;
    const double at9 = 0.9863611855;
    c.expect(std::abs(oracle(1.0) - at1) < 1e-9, "oracle self-check at 1 kHz");
    c.expect(std::abs(oracle(9.0) - at9) < 1e-9, "oracle self-check at 9 kHz");
    c.expect(std::abs(acoustics::thorp_absorption(1.0) - at1) <= 1e-3,
             "thorp(1 kHz) matches hand evaluation to 1e-3");
    c.expect(std::abs(acoustics::thorp_absorption(9.0) - at9) <= 1e-3,
             "thorp(9 kHz) matches hand evaluation to 1e-3");
    // The formula result is nowhere near the 8.43 dB prose figure; both are
    // carried as fixtures, the formula is authoritative.
    c.expect(std::abs(acoustics::thorp_absorption(9.0) - 8.43) > 7.0,
             "formula value differs from the 8.43 dB figure");
    c.note("thorp(9 kHz) = " + fmt(acoustics::thorp_absorption(9.0)) +
           " dB/km; the 8.43 dB path figure is kept only as a fixture");
    return c.ok;
}

bool criterion_3(Check& c) {
    const phy::OfdmTiming timing;
    double lo = 1.0, hi = 0.0;
    for (const auto& m : phy::mode_table()) {
        const double ratio = m.data_rate_bps / phy::raw_rate(m, timing);
        c.expect(ratio >= 0.975 && ratio <= 0.99,
                 "mode " + std::to_string(m.index) + " ratio " + fmt(ratio) +
                     " in [0.975, 0.99]");
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    c.expect(hi - lo < 0.01, "ratio spread " + fmt(hi - lo) + " < 0.01");
    c.note("ratios span [" + fmt(lo) + ", " + fmt(hi) + "]");
    return c.ok;
}

bool criterion_4(Check& c) {
    const double d = phy::packet_duration(1, 400, phy::OfdmTiming{});
    c.expect(std::abs(d - 5.36) <= 0.01, "packet_duration(mode 1, 400 B) = 5.36 +/- 0.01");
    c.note("duration = " + fmt(d) + " s");
    return c.ok;
}

bool criterion_5(Check& c) {
    const std::size_t n = 10000;
    sim::RngStream rng(2024, 0);
    std::vector<std::complex<double>> h(n), s(n), z(n);
    const double comp_sd = std::sqrt(0.05);
    for (std::size_t k = 0; k < n; ++k) {
        const double th = rng.uniform(0.0, 6.283185307179586);
        const double ph = rng.uniform(0.0, 6.283185307179586);
        h[k] = {std::cos(th), std::sin(th)};
        s[k] = {std::cos(ph), std::sin(ph)};
        z[k] = h[k] * s[k] +
               std::complex<double>(rng.normal(0.0, comp_sd), rng.normal(0.0, comp_sd));
    }
    const double esnr = phy::compute_esnr(h, z, s);
    c.expect(std::abs(esnr - 10.0) <= 0.5, "ESNR " + fmt(esnr) + " within 10 +/- 0.5 dB");

    std::vector<std::complex<double>> h2(n), s2(n), z2(n);
    for (std::size_t k = 0; k < n; ++k) {
        h2[k] = 8.0 * h[k];
        s2[k] = 0.25 * s[k];
        z2[k] = 2.0 * z[k];
    }
    c.expect(phy::compute_esnr(h2, z2, s2) == esnr,
             "power-of-two joint scaling is bit-identical");
    c.note("esnr = " + fmt(esnr) + " dB");
    return c.ok;
}

bool criterion_6(Check& c) {
    const chirp::ChirpSpec spec;

    chirp::CurveOptions big;
    big.trials = 10000;
    const std::vector<double> anchors{10.0, -9.0};
    const auto strong = chirp::detection_curve(spec, anchors, big);
    c.expect(strong[0].probability >= 0.999,
             "P(detect | +10 dB) = " + fmt(strong[0].probability) + " >= 0.999");
    c.expect(strong[1].probability >= 0.85,
             "P(detect | -9 dB) = " + fmt(strong[1].probability) + " >= 0.85");

    chirp::CurveOptions grid_opts;
    grid_opts.trials = 2000;
    std::vector<double> grid;
    for (double s = -20.0; s <= 10.0 + 1e-9; s += 2.0) grid.push_back(s);
    const auto curve = chirp::detection_curve(spec, grid, grid_opts);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const double p0 = curve[i - 1].probability;
        const double p1 = curve[i].probability;
        const double n = static_cast<double>(grid_opts.trials);
        const double guard =
            2.0 * std::sqrt(p0 * (1 - p0) / n + p1 * (1 - p1) / n) + 1e-9;
        c.expect(p1 >= p0 - std::max(guard, 0.01),
                 "monotone at " + fmt(curve[i].snr_db) + " dB (" + fmt(p0) + " -> " +
                     fmt(p1) + ")");
    }
    const double fa = chirp::false_alarm_rate(spec, 10000, spec.sample_count() + 512);
    c.expect(fa <= 0.01, "noise-only false alarm " + fmt(fa) + " <= 1%");
    c.note("curve: " + fmt(curve.front().probability) + " at -20 dB, " +
           fmt(curve.back().probability) + " at +10 dB, false alarm " + fmt(fa));
    return c.ok;
}

bool criterion_7(Check& c) {
    const double fs = 48000.0;
    const double duration = 5.36;
    const auto boundary = static_cast<std::int64_t>(std::llround(duration * fs));
    const double preamble = 0.040;
    int tested = 0;
    const auto check_offset = [&](std::int64_t s) {
        chirp::DetectionReport report;
        report.peak_times = {0, s};
        report.peak_scores = {1.0, 1.0};
        const bool expected = (static_cast<double>(s) / fs) < duration;
        if (chirp::classify_collision(report, duration, fs) != expected) {
            c.expect(false, "chirp predicate at offset " + std::to_string(s));
        }
        const auto cls = medium::classify_offset(static_cast<double>(s) / fs, duration,
                                                 preamble);
        const bool medium_says = cls == medium::OverlapClass::collision;
        if (static_cast<double>(s) / fs >= preamble && medium_says != expected) {
            c.expect(false, "medium classification at offset " + std::to_string(s));
        }
        ++tested;
    };
    for (std::int64_t s = boundary - 500; s <= boundary + 500; ++s) check_offset(s);
    for (std::int64_t s = static_cast<std::int64_t>(preamble * fs); s < 2 * boundary;
         s += 997) {
        check_offset(s);
    }
    c.note(std::to_string(tested) + " offsets; boundary sample " +
           std::to_string(boundary) + " itself classifies as no-collision");
    return c.ok;
}

bool criterion_8(Check& c) {
    using mac::Event;
    using mac::EventKind;
    using mac::Phase;
    mac::Params p;
    p.cw_min = 4;
    p.cw_max = 64;
    p.slot_s = 0.47;
    p.max_delay_s = 0.47;
    mac::Context ctx;
    ctx.data_duration = [](int mode, int bytes) {
        return phy::packet_duration(mode, bytes, phy::OfdmTiming{});
    };

    const auto in_phase = [](Phase ph) {
        mac::NodeState st;
        st.cw = 4;
        st.current_mode = 3;
        st.measured_delay_s = 0.47;
        if (ph != Phase::idle && ph != Phase::paused) st.current = mac::PacketDesc{1, 400, 0.0};
        st.phase = ph;
        if (ph == Phase::backoff || ph == Phase::deferring) st.backoff_remaining = 2;
        if (ph == Phase::deferring) {
            st.nav_active = true;
            st.nav_until_s = 10.0;
        }
        if (ph == Phase::paused) st.current_mode = 0;
        return st;
    };
    const auto make_event = [](EventKind k) {
        Event e{k};
        if (k == EventKind::packet_ready) e.packet = mac::PacketDesc{7, 400, 0.0};
        if (k == EventKind::channel_busy) e.busy_duration_s = 6.9;
        if (k == EventKind::ack) e.esnr_db = 7.5;
        return e;
    };
    const auto legal = [](Phase ph, EventKind k) {
        switch (k) {
            case EventKind::packet_ready: return true;
            case EventKind::channel_busy: return ph != Phase::transmitting;
            case EventKind::nav_expired:
                return ph == Phase::deferring || ph == Phase::idle ||
                       ph == Phase::awaiting_ack || ph == Phase::paused;
            case EventKind::backoff_slot_tick: return ph == Phase::backoff;
            case EventKind::tx_done: return ph == Phase::transmitting;
            case EventKind::ack:
            case EventKind::nack1:
            case EventKind::timeout: return ph == Phase::awaiting_ack;
            case EventKind::nack2: return ph != Phase::transmitting;
            case EventKind::pause_over: return ph == Phase::paused;
        }
        return false;
    };

    const Phase phases[] = {Phase::idle,         Phase::backoff,
                            Phase::deferring,    Phase::transmitting,
                            Phase::awaiting_ack, Phase::paused};
    const EventKind events[] = {EventKind::packet_ready, EventKind::channel_busy,
                                EventKind::nav_expired,  EventKind::backoff_slot_tick,
                                EventKind::tx_done,      EventKind::ack,
                                EventKind::nack1,        EventKind::nack2,
                                EventKind::timeout,      EventKind::pause_over};
    int pairs = 0;
    for (Phase ph : phases) {
        for (EventKind k : events) {
            mac::NodeState st = in_phase(ph);
            if (k == EventKind::nav_expired && ph != Phase::deferring) st.nav_active = true;
            sim::RngStream rng(3, 0);
            bool threw = false;
            try {
                mac::sender_step(st, make_event(k), 0.0, rng, p, ctx);
            } catch (const mac::ProtocolViolation&) {
                threw = true;
            }
            if (threw == legal(ph, k)) {
                c.expect(false, std::string("pair (") + mac::to_string(ph) + ", " +
                                    mac::to_string(k) + ") legality");
            }
            ++pairs;
        }
    }

    // NACK1: immediate retransmission, one mode lower, no backoff timer.
    {
        mac::NodeState st = in_phase(Phase::awaiting_ack);
        sim::RngStream rng(3, 0);
        const auto r = mac::sender_step(st, make_event(EventKind::nack1), 0.0, rng, p, ctx);
        bool has_backoff_timer = false, has_tx = false;
        for (const auto& a : r.actions) {
            if (a.kind == mac::ActionKind::set_timer && a.timer == mac::TimerId::backoff_slot) {
                has_backoff_timer = true;
            }
            if (a.kind == mac::ActionKind::start_transmission) has_tx = true;
        }
        c.expect(!has_backoff_timer && has_tx && r.state.current_mode == 2,
                 "NACK1 retransmits immediately at one mode lower");
    }
    // NACK2/timeout: cw doubles up to the cap.
    {
        int cw = p.cw_min;
        mac::NodeState st = in_phase(Phase::awaiting_ack);
        for (int k = 0; k < 7; ++k) {
            st.phase = Phase::awaiting_ack;
            st.retries = 0;
            st.current = mac::PacketDesc{1, 400, 0.0};
            sim::RngStream rng(static_cast<std::uint64_t>(k), 1);
            const auto r =
                mac::sender_step(st, make_event(EventKind::timeout), 0.0, rng, p, ctx);
            cw = std::min(2 * cw, p.cw_max);
            if (r.state.cw != cw || r.state.current_mode != 3) {
                c.expect(false, "cw doubling step " + std::to_string(k));
            }
            st = r.state;
        }
        c.expect(st.cw == p.cw_max, "cw saturates at cw_max");
    }
    // The 4th failure drops the packet.
    {
        mac::NodeState st = in_phase(Phase::awaiting_ack);
        st.retries = 3;
        sim::RngStream rng(9, 0);
        const auto r = mac::sender_step(st, make_event(EventKind::timeout), 0.0, rng, p, ctx);
        bool dropped = false;
        for (const auto& a : r.actions) {
            if (a.kind == mac::ActionKind::drop_packet) dropped = true;
        }
        c.expect(dropped && r.state.retries == 0 && r.state.cw == p.cw_min,
                 "4th failure drops and resets");
    }
    // Receiver states I-IV.
    {
        mac::ReceptionOutcome oc;
        oc.kind = mac::ReceptionOutcome::Kind::decoded;
        oc.esnr_db = 7.5;
        c.expect(mac::receiver_step(oc, 4).kind == mac::Response::Kind::ack &&
                     mac::receiver_step(oc, 4).addressee == 4,
                 "decoded -> unicast ACK with ESNR");
        oc.kind = mac::ReceptionOutcome::Kind::preamble_only;
        c.expect(mac::receiver_step(oc, 4).kind == mac::Response::Kind::nack1,
                 "preamble only -> NACK1");
        oc.kind = mac::ReceptionOutcome::Kind::collision_detected;
        c.expect(mac::receiver_step(oc, 4).kind == mac::Response::Kind::nack2 &&
                     mac::receiver_step(oc, 4).addressee == -1,
                 "collision -> broadcast NACK2");
        oc.kind = mac::ReceptionOutcome::Kind::missed;
        c.expect(mac::receiver_step(oc, 4).kind == mac::Response::Kind::none,
                 "missed -> silence");
    }
    c.note(std::to_string(pairs) + " (phase, event) pairs checked");
    return c.ok;
}

bool criterion_9(Check& c) {
    std::vector<double> sim_thr, pred_thr;
    for (int rep = 0; rep < 10; ++rep) {
        ScenarioConfig cfg = trend_config(1, 0.5, 301 + static_cast<std::uint64_t>(rep));
        NetworkSim sim(cfg);
        const auto& m = sim.run();
        const double t_data = sim.data_duration(1);
        const double delay = sim.topology().delay(1, 0);
        const double slot = std::max(delay, 1e-3);
        const double expected_backoff = (cfg.mac.cw_min / 2.0) * slot;
        sim_thr.push_back(normalized_throughput(m, t_data));
        pred_thr.push_back(t_data / (t_data + 2.0 * delay + cfg.mac.ack_duration_s +
                                     cfg.mac.t_other_s + expected_backoff));
        if (!m.conserved()) c.expect(false, "conservation in rep " + std::to_string(rep));
    }
    const double ratio = mean(sim_thr) / mean(pred_thr);
    c.expect(std::abs(ratio - 1.0) <= 0.02,
             "simulated/predicted = " + fmt(ratio) + " within 2%");
    c.note("sim " + fmt(mean(sim_thr)) + " vs closed form " + fmt(mean(pred_thr)));
    return c.ok;
}

bool criterion_10(Check& c) {
    const int reps = 10;
    const std::vector<double> loads{0.02, 0.04, 0.07, 0.10, 0.14, 0.20, 0.30};
    std::vector<double> saturated_means;
    std::vector<double> saturated_sigmas;

    for (int nodes : {2, 5, 10}) {
        // (a) Load sweep: rises, stays monotone within noise, then plateaus.
        std::vector<double> means, sigmas;
        for (double load : loads) {
            const auto thr = throughputs(trend_config(nodes, load), reps, 5.36);
            means.push_back(mean(thr));
            sigmas.push_back(sigma_of_mean(thr));
        }
        for (std::size_t i = 1; i < means.size(); ++i) {
            const double guard =
                2.0 * std::sqrt(sigmas[i] * sigmas[i] + sigmas[i - 1] * sigmas[i - 1]);
            c.expect(means[i] >= means[i - 1] - guard,
                     "N=" + std::to_string(nodes) + " load sweep nondecreasing at load " +
                         fmt(loads[i]));
        }
        const std::size_t last = means.size() - 1;
        c.expect(means[last] >
                     means[0] + 2.0 * std::sqrt(sigmas[0] * sigmas[0] +
                                                sigmas[last] * sigmas[last]),
                 "N=" + std::to_string(nodes) + " load sweep rises significantly");
        c.expect(std::abs(means[last] - means[last - 1]) <=
                     2.0 * std::sqrt(sigmas[last] * sigmas[last] +
                                     sigmas[last - 1] * sigmas[last - 1]) + 0.01,
                 "N=" + std::to_string(nodes) + " load sweep plateaus");
        saturated_means.push_back(means[last]);
        saturated_sigmas.push_back(sigmas[last]);
        c.note("N=" + std::to_string(nodes) + " saturated throughput " + fmt(means[last]));
    }

    // (b) Saturated throughput nonincreasing in N.
    for (std::size_t i = 1; i < saturated_means.size(); ++i) {
        const double guard = 2.0 * std::sqrt(saturated_sigmas[i] * saturated_sigmas[i] +
                                             saturated_sigmas[i - 1] * saturated_sigmas[i - 1]);
        c.expect(saturated_means[i] <= saturated_means[i - 1] + guard,
                 "saturated throughput nonincreasing in N (step " + std::to_string(i) + ")");
    }

    // (c) Saturated throughput nonincreasing as the PT-ratio grows.
    for (int nodes : {2, 5, 10}) {
        double prev_mean = 1e9, prev_sigma = 0.0;
        for (double scale : {0.5, 1.0, 2.0, 4.0}) {
            ScenarioConfig cfg = trend_config(nodes, 0.3);
            cfg.delay_scale = scale;
            const auto thr = throughputs(cfg, reps, 5.36);
            const double m = mean(thr), s = sigma_of_mean(thr);
            const double guard = 2.0 * std::sqrt(s * s + prev_sigma * prev_sigma);
            c.expect(m <= prev_mean + guard, "N=" + std::to_string(nodes) +
                                                 " PT sweep nonincreasing at scale " +
                                                 fmt(scale));
            prev_mean = m;
            prev_sigma = s;
        }
    }

    // (d) A 1% packet error rate costs at most 5% throughput.
    for (int nodes : {2, 5, 10}) {
        ScenarioConfig clean = trend_config(nodes, 0.3);
        ScenarioConfig lossy = clean;
        lossy.channel.forced_per = 0.01;
        const double t_clean = mean(throughputs(clean, reps, 5.36));
        const double t_lossy = mean(throughputs(lossy, reps, 5.36));
        c.expect(t_lossy >= 0.95 * t_clean,
                 "N=" + std::to_string(nodes) + " PER 0.01 ratio " +
                     fmt(t_lossy / t_clean) + " >= 0.95");
    }

    // (e) Per-mode saturated normalized throughput nonincreasing in mode.
    for (int nodes : {2, 5, 10}) {
        double prev_mean = 1e9, prev_sigma = 0.0;
        for (int mode = 1; mode <= 6; ++mode) {
            ScenarioConfig cfg = trend_config(nodes, 0.6);
            cfg.mode_policy.fixed_mode = mode;
            NetworkSim probe(cfg);
            const double t_ref = probe.data_duration(mode);
            const auto thr = throughputs(cfg, reps, t_ref);
            const double m = mean(thr), s = sigma_of_mean(thr);
            const double guard = 2.0 * std::sqrt(s * s + prev_sigma * prev_sigma);
            c.expect(m <= prev_mean + guard, "N=" + std::to_string(nodes) +
                                                 " mode sweep nonincreasing at mode " +
                                                 std::to_string(mode));
            prev_mean = m;
            prev_sigma = s;
        }
    }
    return c.ok;
}

bool criterion_11(Check& c) {
    const int reps = 10;
    for (double esnr = -2.0; esnr <= 15.0 + 1e-9; esnr += 1.0) {
        ScenarioConfig base;
        base.node_count = 1;
        base.offered_load_pps = 0.05;  // below every working mode's capacity
        base.sim_duration_s = 2000.0;
        base.seed = 501;
        base.channel.esnr_trace = {{0.0, esnr}};

        ScenarioConfig adaptive = base;
        adaptive.mode_policy.type = ModePolicy::Type::adaptive;
        std::vector<double> agp;
        for (const auto& m : run_replications(adaptive, reps)) {
            agp.push_back(goodput_after_warmup_bps(m));
        }

        double best_fixed = 0.0;
        for (int mode = 1; mode <= 6; ++mode) {
            ScenarioConfig fixed = base;
            fixed.mode_policy.type = ModePolicy::Type::fixed;
            fixed.mode_policy.fixed_mode = mode;
            std::vector<double> gp;
            for (const auto& m : run_replications(fixed, reps)) {
                gp.push_back(goodput_after_warmup_bps(m));
            }
            best_fixed = std::max(best_fixed, mean(gp));
        }

        if (esnr <= -1.0 + 1e-9) {
            // Harsh channel: the adaptive node parks at mode 0 and moves no
            // payload at all. (At exactly -1 dB fixed mode 1 still works by
            // the PER anchor, so the ratio clause applies only above -1.)
            double worst = 0.0;
            for (double g : agp) worst = std::max(worst, g);
            c.expect(worst == 0.0, "adaptive goodput exactly 0 at ESNR " + fmt(esnr));
        } else {
            c.expect(mean(agp) >= 0.9 * best_fixed,
                     "adaptive " + fmt(mean(agp)) + " >= 0.9 x best fixed " +
                         fmt(best_fixed) + " at ESNR " + fmt(esnr));
        }
    }
    c.note("grid -2..15 dB step 1; warm-up 10 deliveries");
    return c.ok;
}

bool criterion_12(Check& c) {
    ScenarioConfig cfg = trend_config(3, 0.15, 909);
    cfg.sim_duration_s = 600.0;
    cfg.experiments.node_counts = {2, 3};
    cfg.experiments.loads_pps = {0.05, 0.2};
    exp::RunOptions opts;
    opts.replications = 4;
    opts.parallel = true;

    const std::string csv_a = exp::to_csv(exp::load_sweep(cfg, opts));
    const std::string csv_b = exp::to_csv(exp::load_sweep(cfg, opts));
    c.expect(csv_a == csv_b, "load_sweep CSV byte-identical across invocations");

    opts.parallel = false;
    const std::string csv_serial = exp::to_csv(exp::load_sweep(cfg, opts));
    c.expect(csv_a == csv_serial, "parallel CSV identical to the serial reference");

    NetworkSim run1(cfg, true);
    NetworkSim run2(cfg, true);
    run1.run();
    run2.run();
    bool traces_equal = run1.trace().size() == run2.trace().size();
    for (std::size_t i = 0; traces_equal && i < run1.trace().size(); ++i) {
        traces_equal = run1.trace()[i].time_s == run2.trace()[i].time_s &&
                       run1.trace()[i].node == run2.trace()[i].node &&
                       run1.trace()[i].actions == run2.trace()[i].actions;
    }
    c.expect(traces_equal, "transition traces bit-identical");
    c.note(std::to_string(csv_a.size()) + " CSV bytes compared");
    return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        int id;
        const char* name;
        std::function<bool(Check&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "link-budget fixtures", criterion_1},
        {2, "absorption-formula oracle and fixture discrepancy", criterion_2},
        {3, "mode-table rate consistency", criterion_3},
        {4, "packet timing calibration (5.36 s)", criterion_4},
        {5, "ESNR estimator oracle and scaling invariance", criterion_5},
        {6, "chirp detection probabilities", criterion_6},
        {7, "collision predicate, exhaustive offsets", criterion_7},
        {8, "MAC transition table", criterion_8},
        {9, "single-node saturation closed form", criterion_9},
        {10, "throughput trends (load, N, PT, PER, modes)", criterion_10},
        {11, "adaptive vs fixed goodput", criterion_11},
        {12, "bit-identical reruns", criterion_12},
    };

    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    int failed = 0;
    for (const auto& cr : criteria) {
        if (only != 0 && cr.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Check check;
        bool ok = false;
        try {
            ok = cr.run(check);
        } catch (const std::exception& e) {
            check.log << "    exception: " << e.what() << "\n";
            ok = false;
        }
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %2d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", cr.id,
                    cr.name, dt);
        const std::string details = check.log.str();
        if (!details.empty() && (!ok || only != 0)) std::fputs(details.c_str(), stdout);
        if (!ok) ++failed;
    }
    if (failed == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criteria FAILED\n", failed);
    }
    return failed;
}
