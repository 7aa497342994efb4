#include "uwmac/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace uwmac::exp {

Stat stat_of(const std::vector<double>& xs) {
    Stat s;
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double acc = 0.0;
        for (double x : xs) acc += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(acc / static_cast<double>(xs.size() - 1));
    }
    return s;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<RunMetrics> replicate(const ScenarioConfig& cfg, const RunOptions& opts) {
    return opts.parallel ? run_replications(cfg, opts.replications)
                         : run_replications_serial(cfg, opts.replications);
}

std::uint64_t violations(const std::vector<RunMetrics>& runs) {
    std::uint64_t v = 0;
    for (const auto& m : runs) v += m.assert_violations;
    return v;
}

std::vector<double> esnr_grid(const ExperimentGrids& g) {
    std::vector<double> grid;
    for (double e = g.esnr_min_db; e <= g.esnr_max_db + 1e-9; e += g.esnr_step_db) {
        grid.push_back(e);
    }
    return grid;
}

}  // namespace

void write_csv(const Table& table, std::ostream& out) {
    out << "# family: " << table.family << "\n";
    out << "# effective_config: " << table.effective_config << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out << ',';
        out << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << fmt(row[c]);
        }
        out << '\n';
    }
}

std::string to_csv(const Table& table) {
    std::ostringstream ss;
    write_csv(table, ss);
    return ss.str();
}

Family family_from_name(const std::string& name) {
    if (name == "load_sweep" || name == "sweep-load") return Family::load_sweep;
    if (name == "pt_sweep" || name == "sweep-pt") return Family::pt_sweep;
    if (name == "per_sweep" || name == "sweep-per") return Family::per_sweep;
    if (name == "mode_compare" || name == "compare-modes") return Family::mode_compare;
    if (name == "adaptive_vs_fixed" || name == "adaptive") return Family::adaptive_vs_fixed;
    throw ConfigError("unknown experiment family: " + name);
}

const char* family_name(Family f) {
    switch (f) {
        case Family::load_sweep: return "load_sweep";
        case Family::pt_sweep: return "pt_sweep";
        case Family::per_sweep: return "per_sweep";
        case Family::mode_compare: return "mode_compare";
        case Family::adaptive_vs_fixed: return "adaptive_vs_fixed";
    }
    return "?";
}

Table load_sweep(const ScenarioConfig& base, const RunOptions& opts) {
    Table t;
    t.family = "load_sweep";
    t.effective_config = config_to_json(base);
    // Offered load is the aggregate over all senders; per-node rate is
    // load / N, so the totals stay comparable as N varies.
    t.columns = {"nodes", "offered_load_pps", "reps",
                 "norm_throughput_mean", "norm_throughput_std",
                 "goodput_bps_mean", "goodput_bps_std",
                 "delivered_mean", "dropped_mean", "collisions_mean",
                 "retransmissions_mean"};
    for (int n : base.experiments.node_counts) {
        for (double load : base.experiments.loads_pps) {
            ScenarioConfig cfg = base;
            cfg.node_count = n;
            cfg.offered_load_pps = load;
            const auto runs = replicate(cfg, opts);
            t.assert_violations += violations(runs);
            const double t_ref = NetworkSim(cfg).data_duration(
                cfg.mode_policy.type == ModePolicy::Type::fixed
                    ? cfg.mode_policy.fixed_mode
                    : 1);
            std::vector<double> thr, gp, del, drop, col, rtx;
            for (const auto& m : runs) {
                thr.push_back(normalized_throughput(m, t_ref));
                gp.push_back(goodput_bps(m));
                del.push_back(static_cast<double>(m.delivered));
                drop.push_back(static_cast<double>(m.dropped));
                col.push_back(static_cast<double>(m.collisions));
                rtx.push_back(static_cast<double>(m.retransmissions));
            }
            const Stat st = stat_of(thr), sg = stat_of(gp);
            t.rows.push_back({static_cast<double>(n), load,
                              static_cast<double>(opts.replications), st.mean, st.stddev,
                              sg.mean, sg.stddev, stat_of(del).mean, stat_of(drop).mean,
                              stat_of(col).mean, stat_of(rtx).mean});
        }
    }
    return t;
}

Table pt_sweep(const ScenarioConfig& base, const RunOptions& opts) {
    Table t;
    t.family = "pt_sweep";
    t.effective_config = config_to_json(base);
    t.columns = {"nodes", "delay_scale", "pt_ratio", "reps",
                 "norm_throughput_mean", "norm_throughput_std",
                 "goodput_bps_mean", "goodput_bps_std"};
    for (int n : base.experiments.node_counts) {
        for (double scale : base.experiments.delay_scales) {
            ScenarioConfig cfg = base;
            cfg.node_count = n;
            cfg.delay_scale = scale;
            cfg.offered_load_pps = base.experiments.saturation_load_pps;
            const auto runs = replicate(cfg, opts);
            t.assert_violations += violations(runs);
            NetworkSim probe(cfg);
            const int mode = cfg.mode_policy.type == ModePolicy::Type::fixed
                                 ? cfg.mode_policy.fixed_mode
                                 : 1;
            const double t_ref = probe.data_duration(mode);
            const double pt = pt_ratio(probe.avg_propagation_delay(), t_ref);
            std::vector<double> thr, gp;
            for (const auto& m : runs) {
                thr.push_back(normalized_throughput(m, t_ref));
                gp.push_back(goodput_bps(m));
            }
            const Stat st = stat_of(thr), sg = stat_of(gp);
            t.rows.push_back({static_cast<double>(n), scale, pt,
                              static_cast<double>(opts.replications), st.mean, st.stddev,
                              sg.mean, sg.stddev});
        }
    }
    return t;
}

Table per_sweep(const ScenarioConfig& base, const RunOptions& opts) {
    Table t;
    t.family = "per_sweep";
    t.effective_config = config_to_json(base);
    t.columns = {"nodes", "forced_per", "reps",
                 "norm_throughput_mean", "norm_throughput_std",
                 "goodput_bps_mean", "goodput_bps_std", "retransmissions_mean"};
    for (int n : base.experiments.node_counts) {
        for (double per : base.experiments.forced_pers) {
            ScenarioConfig cfg = base;
            cfg.node_count = n;
            cfg.channel.forced_per = per;
            cfg.offered_load_pps = base.experiments.saturation_load_pps;
            const auto runs = replicate(cfg, opts);
            t.assert_violations += violations(runs);
            const double t_ref = NetworkSim(cfg).data_duration(
                cfg.mode_policy.type == ModePolicy::Type::fixed
                    ? cfg.mode_policy.fixed_mode
                    : 1);
            std::vector<double> thr, gp, rtx;
            for (const auto& m : runs) {
                thr.push_back(normalized_throughput(m, t_ref));
                gp.push_back(goodput_bps(m));
                rtx.push_back(static_cast<double>(m.retransmissions));
            }
            const Stat st = stat_of(thr), sg = stat_of(gp);
            t.rows.push_back({static_cast<double>(n), per,
                              static_cast<double>(opts.replications), st.mean, st.stddev,
                              sg.mean, sg.stddev, stat_of(rtx).mean});
        }
    }
    return t;
}

Table mode_compare(const ScenarioConfig& base, const RunOptions& opts) {
    Table t;
    t.family = "mode_compare";
    t.effective_config = config_to_json(base);
    // Each fixed mode is normalized by its own packet duration.
    t.columns = {"mode", "t_data_s", "reps",
                 "norm_throughput_mean", "norm_throughput_std",
                 "goodput_bps_mean", "goodput_bps_std"};
    for (std::size_t m = 1; m <= base.modes.size(); ++m) {
        ScenarioConfig cfg = base;
        cfg.mode_policy.type = ModePolicy::Type::fixed;
        cfg.mode_policy.fixed_mode = static_cast<int>(m);
        cfg.offered_load_pps = base.experiments.saturation_load_pps;
        const auto runs = replicate(cfg, opts);
        t.assert_violations += violations(runs);
        const double t_ref = NetworkSim(cfg).data_duration(static_cast<int>(m));
        std::vector<double> thr, gp;
        for (const auto& r : runs) {
            thr.push_back(normalized_throughput(r, t_ref));
            gp.push_back(goodput_bps(r));
        }
        const Stat st = stat_of(thr), sg = stat_of(gp);
        t.rows.push_back({static_cast<double>(m), t_ref,
                          static_cast<double>(opts.replications), st.mean, st.stddev,
                          sg.mean, sg.stddev});
    }
    return t;
}

Table adaptive_vs_fixed(const ScenarioConfig& base, const RunOptions& opts) {
    Table t;
    t.family = "adaptive_vs_fixed";
    t.effective_config = config_to_json(base);
    t.columns = {"esnr_db", "reps", "adaptive_goodput_bps_mean",
                 "adaptive_goodput_bps_std"};
    for (std::size_t m = 1; m <= base.modes.size(); ++m) {
        t.columns.push_back("fixed" + std::to_string(m) + "_goodput_bps_mean");
        t.columns.push_back("fixed" + std::to_string(m) + "_goodput_bps_std");
    }
    // Goodput is measured after a warm-up of the first few deliveries so the
    // adaptive policy's cold start (no ESNR feedback yet) does not bias it.
    for (double esnr : esnr_grid(base.experiments)) {
        std::vector<double> row{esnr, static_cast<double>(opts.replications)};
        for (int policy = 0; policy <= static_cast<int>(base.modes.size()); ++policy) {
            ScenarioConfig cfg = base;
            cfg.channel.esnr_trace = {{0.0, esnr}};
            cfg.channel.esnr_trace_per_node.clear();
            // This family compares policies under the ESNR-driven error
            // model; a forced PER would make every mode equivalent.
            cfg.channel.forced_per.reset();
            if (policy == 0) {
                cfg.mode_policy.type = ModePolicy::Type::adaptive;
            } else {
                cfg.mode_policy.type = ModePolicy::Type::fixed;
                cfg.mode_policy.fixed_mode = policy;
            }
            const auto runs = replicate(cfg, opts);
            t.assert_violations += violations(runs);
            std::vector<double> gp;
            for (const auto& r : runs) gp.push_back(goodput_after_warmup_bps(r));
            const Stat s = stat_of(gp);
            row.push_back(s.mean);
            row.push_back(s.stddev);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table run_experiment(Family family, const ScenarioConfig& cfg, const RunOptions& opts) {
    if (opts.replications < 1) throw ConfigError("replications must be >= 1");
    switch (family) {
        case Family::load_sweep: return load_sweep(cfg, opts);
        case Family::pt_sweep: return pt_sweep(cfg, opts);
        case Family::per_sweep: return per_sweep(cfg, opts);
        case Family::mode_compare: return mode_compare(cfg, opts);
        case Family::adaptive_vs_fixed: return adaptive_vs_fixed(cfg, opts);
    }
    throw ConfigError("unknown experiment family");
}

}  // namespace uwmac::exp
