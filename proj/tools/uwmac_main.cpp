// Command-line front end for the star-network MAC simulator: scenario runs,
// the five experiment sweeps, the chirp detection-curve generator and the
// acoustic link-budget calculator.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "uwmac/budget.hpp"
#include "uwmac/chirp.hpp"
#include "uwmac/config.hpp"
#include "uwmac/experiments.hpp"
#include "uwmac/network_sim.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    int reps = 10;
    bool quiet = false;
    bool serial = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required = true) {
    auto* copt = cmd->add_option("--config", o.config_path, "scenario config file (JSON)");
    if (config_required) copt->required();
    cmd->add_option("--seed", o.seed, "override the config seed");
    cmd->add_option("--out", o.out_path, "output CSV path");
    cmd->add_option("--reps", o.reps, "replications per grid point")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--quiet", o.quiet, "suppress per-row summaries");
    cmd->add_flag("--serial", o.serial, "disable OpenMP parallel replications");
}

uwmac::ScenarioConfig load(const CommonOpts& o) {
    auto cfg = uwmac::cfg::load_config(o.config_path);
    if (o.seed) cfg.seed = *o.seed;
    return cfg;
}

void write_out(const std::string& text, const std::string& path) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << text;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int run_family(uwmac::exp::Family family, const CommonOpts& o) {
    const auto cfg = load(o);
    uwmac::exp::RunOptions opts;
    opts.replications = o.reps;
    opts.parallel = !o.serial;
    const auto table = uwmac::exp::run_experiment(family, cfg, opts);
    const auto csv = uwmac::exp::to_csv(table);
    write_out(csv, o.out_path);
    if (!o.quiet) {
        if (o.out_path.empty()) {
            std::cout << csv;
        } else {
            // One summary line per grid point.
            for (const auto& row : table.rows) {
                std::cout << table.family;
                for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
                    std::cout << ' ' << table.columns[c] << '=' << fmt(row[c]);
                }
                std::cout << '\n';
            }
            std::cout << "wrote " << o.out_path << " (" << table.rows.size()
                      << " grid points)\n";
        }
    }
    return table.assert_violations == 0 ? 0 : 3;
}

int run_single(const CommonOpts& o, bool trace, const std::string& trace_path) {
    const auto cfg = load(o);
    if (!o.quiet) {
        std::cout << "# effective_config: " << uwmac::cfg::to_json_text(cfg) << "\n";
    }
    std::uint64_t violations = 0;
    std::string csv = "# family: run\n# effective_config: " +
                      uwmac::cfg::to_json_text(cfg) +
                      "\nreplication,seed,generated,delivered,dropped,collisions,"
                      "retransmissions,norm_throughput,goodput_bps,in_flight\n";
    std::string trace_csv = "time_s,node,phase_before,event,phase_after,actions\n";
    for (int r = 0; r < o.reps; ++r) {
        uwmac::ScenarioConfig c = cfg;
        c.seed = cfg.seed + static_cast<std::uint64_t>(r);
        uwmac::NetworkSim sim(c, trace);
        const auto& m = sim.run();
        violations += m.assert_violations;
        const int ref_mode = c.mode_policy.type == uwmac::ModePolicy::Type::fixed
                                 ? c.mode_policy.fixed_mode
                                 : 1;
        const double thr = uwmac::normalized_throughput(m, sim.data_duration(ref_mode));
        csv += std::to_string(r) + ',' + std::to_string(c.seed) + ',' +
               std::to_string(m.generated) + ',' + std::to_string(m.delivered) + ',' +
               std::to_string(m.dropped) + ',' + std::to_string(m.collisions) + ',' +
               std::to_string(m.retransmissions) + ',' + fmt(thr) + ',' +
               fmt(uwmac::goodput_bps(m)) + ',' + std::to_string(m.in_flight_end) + '\n';
        if (!o.quiet) {
            std::cout << "rep " << r << ": generated=" << m.generated
                      << " delivered=" << m.delivered << " dropped=" << m.dropped
                      << " collisions=" << m.collisions
                      << " throughput=" << fmt(thr)
                      << " goodput=" << fmt(uwmac::goodput_bps(m)) << " bps\n";
        }
        if (trace) {
            for (const auto& row : sim.trace()) {
                trace_csv += fmt(row.time_s) + ',' + std::to_string(row.node) + ',' +
                             uwmac::mac::to_string(row.phase_before) + ',' +
                             uwmac::mac::to_string(row.event) + ',' +
                             uwmac::mac::to_string(row.phase_after) + ",\"" +
                             row.actions + "\"\n";
            }
        }
    }
    write_out(csv, o.out_path);
    if (trace && !trace_path.empty()) write_out(trace_csv, trace_path);
    return violations == 0 ? 0 : 3;
}

int run_detect_curve(const CommonOpts& o, double snr_min, double snr_max, double step,
                     int trials, bool overlapped, double sir) {
    uwmac::chirp::ChirpSpec spec;  // the 40 ms 6-12 kHz preamble
    uwmac::chirp::CurveOptions opts;
    opts.trials = trials;
    opts.overlapped = overlapped;
    opts.sir_db = sir;
    if (o.seed) opts.seed = *o.seed;
    std::vector<double> grid;
    for (double s = snr_min; s <= snr_max + 1e-9; s += step) grid.push_back(s);
    const auto curve = o.serial
                           ? uwmac::chirp::detection_curve_serial(spec, grid, opts)
                           : uwmac::chirp::detection_curve(spec, grid, opts);
    std::string csv = "snr_db,probability,trials\n";
    for (const auto& p : curve) {
        csv += fmt(p.snr_db) + ',' + fmt(p.probability) + ',' + std::to_string(p.trials) +
               '\n';
        if (!o.quiet) {
            std::cout << "snr " << p.snr_db << " dB -> " << p.probability << " ("
                      << p.trials << " trials)\n";
        }
    }
    write_out(csv, o.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Underwater acoustic star-network MAC/PHY simulator"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    bool trace = false;
    std::string trace_path;
    auto* run = app.add_subcommand("run", "run one scenario for N replications");
    add_common(run, run_opts);
    run->add_flag("--trace", trace, "record per-node MAC transition logs");
    run->add_option("--trace-out", trace_path, "transition log CSV path");
    run->footer("CSV columns: replication,seed,generated,delivered,dropped,collisions,"
                "retransmissions,norm_throughput,goodput_bps,in_flight\n"
                "trace CSV: time_s,node,phase_before,event,phase_after,actions");

    CommonOpts sweep_load_opts, sweep_pt_opts, sweep_per_opts, modes_opts, adaptive_opts;
    auto* s1 = app.add_subcommand(
        "sweep-load", "normalized throughput vs offered load and node count");
    add_common(s1, sweep_load_opts);
    s1->footer("CSV columns: nodes,offered_load_pps,reps,norm_throughput_mean,"
               "norm_throughput_std,goodput_bps_mean,goodput_bps_std,delivered_mean,"
               "dropped_mean,collisions_mean,retransmissions_mean");
    auto* s2 = app.add_subcommand("sweep-pt", "saturated throughput vs PT-ratio");
    add_common(s2, sweep_pt_opts);
    s2->footer("CSV columns: nodes,delay_scale,pt_ratio,reps,norm_throughput_mean,"
               "norm_throughput_std,goodput_bps_mean,goodput_bps_std");
    auto* s3 = app.add_subcommand("sweep-per", "throughput vs forced packet error rate");
    add_common(s3, sweep_per_opts);
    s3->footer("CSV columns: nodes,forced_per,reps,norm_throughput_mean,"
               "norm_throughput_std,goodput_bps_mean,goodput_bps_std,"
               "retransmissions_mean");
    auto* s4 = app.add_subcommand("compare-modes",
                                  "saturated normalized throughput per fixed mode");
    add_common(s4, modes_opts);
    s4->footer("CSV columns: mode,t_data_s,reps,norm_throughput_mean,"
               "norm_throughput_std,goodput_bps_mean,goodput_bps_std "
               "(each mode normalized by its own packet duration)");
    auto* s5 = app.add_subcommand("adaptive",
                                  "adaptive vs fixed-mode goodput over an ESNR grid");
    add_common(s5, adaptive_opts);
    s5->footer("CSV columns: esnr_db,reps,adaptive_goodput_bps_mean,"
               "adaptive_goodput_bps_std,fixed<m>_goodput_bps_{mean,std} for m=1..6 "
               "(goodput measured after the warm-up deliveries)");

    CommonOpts curve_opts;
    double snr_min = -20.0, snr_max = 10.0, snr_step = 2.0, sir = 0.0;
    int trials = 10000;
    bool overlapped = false;
    auto* s6 = app.add_subcommand("detect-curve",
                                  "Monte-Carlo preamble detection probability vs SNR");
    add_common(s6, curve_opts, /*config_required=*/false);
    s6->footer("CSV columns: snr_db,probability,trials");
    s6->add_option("--snr-min", snr_min, "grid start, dB");
    s6->add_option("--snr-max", snr_max, "grid end, dB");
    s6->add_option("--snr-step", snr_step, "grid step, dB")->check(CLI::PositiveNumber);
    s6->add_option("--trials", trials, "Monte-Carlo trials per point")
        ->check(CLI::Range(100, 10000000));
    s6->add_flag("--overlapped", overlapped, "add a payload-like interferer");
    s6->add_option("--sir", sir, "signal-to-interference ratio for --overlapped, dB");

    double power_w = 2.0, range_m = 1000.0, f_khz = 9.0, nl_db = 100.0;
    auto* s7 = app.add_subcommand("budget", "acoustic link-budget calculator");
    s7->add_option("--power", power_w, "transmit power, W");
    s7->add_option("--range", range_m, "range, m");
    s7->add_option("--freq", f_khz, "center frequency, kHz");
    s7->add_option("--nl", nl_db, "noise level, dB");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_single(run_opts, trace, trace_path);
        if (s1->parsed()) return run_family(uwmac::exp::Family::load_sweep, sweep_load_opts);
        if (s2->parsed()) return run_family(uwmac::exp::Family::pt_sweep, sweep_pt_opts);
        if (s3->parsed()) return run_family(uwmac::exp::Family::per_sweep, sweep_per_opts);
        if (s4->parsed()) return run_family(uwmac::exp::Family::mode_compare, modes_opts);
        if (s5->parsed()) {
            return run_family(uwmac::exp::Family::adaptive_vs_fixed, adaptive_opts);
        }
        if (s6->parsed()) {
            return run_detect_curve(curve_opts, snr_min, snr_max, snr_step, trials,
                                    overlapped, sir);
        }
        if (s7->parsed()) {
            std::cout << uwmac::format_budget_report(
                uwmac::make_budget_report(power_w, range_m, f_khz, nl_db));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
