#include "uwmac/scenario.hpp"

#include <cmath>

namespace uwmac {

namespace {

void require(bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw ConfigError("config field '" + field + "': " + why);
}

void check_trace(const std::vector<std::pair<double, double>>& trace,
                 const std::string& field) {
    require(!trace.empty(), field, "must contain at least one (time, esnr) breakpoint");
    for (std::size_t i = 1; i < trace.size(); ++i) {
        require(trace[i].first > trace[i - 1].first, field,
                "breakpoint times must be strictly increasing");
    }
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
    require(cfg.node_count >= 1, "nodes", "need at least one sender");
    require(cfg.region_m > 0.0, "region_m", "must be positive");
    require(cfg.offered_load_pps > 0.0, "offered_load_pps", "must be positive");
    require(cfg.payload_bytes >= 1, "payload_bytes", "must be at least 1");
    require(cfg.sim_duration_s > 0.0, "sim_duration_s", "must be positive");
    require(cfg.sound_speed_mps > 0.0, "sound_speed_mps", "must be positive");
    require(cfg.delay_scale >= 0.0, "delay_scale", "must be nonnegative");
    require(cfg.warmup_deliveries >= 0, "warmup_deliveries", "must be nonnegative");

    require(!cfg.modes.empty(), "phy.modes", "mode table must not be empty");
    for (std::size_t i = 0; i < cfg.modes.size(); ++i) {
        const auto& m = cfg.modes[i];
        require(m.index == static_cast<int>(i) + 1, "phy.modes",
                "mode indices must be 1..K in order");
        require(m.bits_per_symbol >= 1, "phy.modes", "bits_per_symbol must be >= 1");
        require(m.diversity_order >= 1, "phy.modes", "diversity_order must be >= 1");
        require(m.code_num >= 1 && m.code_den >= 1, "phy.modes",
                "coding rate must be a positive fraction");
        require(m.data_rate_bps > 0.0, "phy.modes", "data_rate_bps must be positive");
        if (i > 0) {
            require(m.data_rate_bps > cfg.modes[i - 1].data_rate_bps, "phy.modes",
                    "data rates must be strictly increasing with mode index");
        }
    }

    if (cfg.mode_policy.type == ModePolicy::Type::fixed) {
        require(cfg.mode_policy.fixed_mode >= 1 &&
                    cfg.mode_policy.fixed_mode <= static_cast<int>(cfg.modes.size()),
                "mode_policy.mode", "fixed mode out of catalog range");
    }

    if (cfg.channel.forced_per) {
        require(*cfg.channel.forced_per >= 0.0 && *cfg.channel.forced_per <= 1.0,
                "channel.forced_per", "must lie in [0, 1]");
    }
    require(cfg.channel.detection_prob >= 0.0 && cfg.channel.detection_prob <= 1.0,
            "channel.detection_prob", "must lie in [0, 1]");
    require(cfg.channel.esnr_jitter_std_db >= 0.0, "channel.esnr_jitter_std_db",
            "must be nonnegative");
    check_trace(cfg.channel.esnr_trace, "channel.esnr_trace");
    for (const auto& [node, trace] : cfg.channel.esnr_trace_per_node) {
        require(node >= 1 && node <= cfg.node_count, "channel.esnr_trace_per_node",
                "node id " + std::to_string(node) + " out of range");
        check_trace(trace, "channel.esnr_trace_per_node[" + std::to_string(node) + "]");
    }

    require(cfg.mac.cw_min >= 1, "mac.cw_min", "must be at least 1");
    require(cfg.mac.cw_max >= cfg.mac.cw_min, "mac.cw_max", "must be >= cw_min");
    require(cfg.mac.t_other_s >= 0.0, "mac.t_other_s", "must be nonnegative");
    require(cfg.mac.ack_duration_s > 0.0, "mac.ack_duration_s", "must be positive");
    require(cfg.mac.nack_duration_s > 0.0, "mac.nack_duration_s", "must be positive");
    require(cfg.mac.probe_duration_s > 0.0, "mac.probe_duration_s", "must be positive");
    require(cfg.mac.timeout_margin_s > 0.0, "mac.timeout_margin_s", "must be positive");
    require(cfg.mac.max_retries >= 0, "mac.max_retries", "must be nonnegative");
    if (!cfg.auto_slot) require(cfg.mac.slot_s > 0.0, "mac.slot_s", "must be positive");
    if (!cfg.auto_pause) require(cfg.mac.pause_s > 0.0, "mac.pause_s", "must be positive");
    require(cfg.pause_factor > 0.0, "mac.pause_factor", "must be positive");

    require(cfg.timing.symbol_duration_s > 0.0, "phy.symbol_duration_s", "must be positive");
    require(cfg.timing.cp_duration_s >= 0.0, "phy.cp_duration_s", "must be nonnegative");
    require(cfg.timing.blocks_per_frame >= 1, "phy.blocks_per_frame", "must be >= 1");
    require(cfg.timing.data_carriers >= 1, "phy.data_carriers", "must be >= 1");
    require(cfg.timing.preamble_duration_s > 0.0, "phy.preamble_duration_s",
            "must be positive");
    require(cfg.timing.header_duration_s >= 0.0, "phy.header_duration_s",
            "must be nonnegative");
    require(cfg.timing.frame_overhead_s >= 0.0, "phy.frame_overhead_s",
            "must be nonnegative");

    for (std::size_t i = 1; i < cfg.thresholds.upper_edges.size(); ++i) {
        require(cfg.thresholds.upper_edges[i] > cfg.thresholds.upper_edges[i - 1],
                "phy.thresholds", "ESNR boundaries must be strictly increasing");
    }
    require(cfg.per_model.slope_decades_per_db > 0.0, "phy.per_slope_decades_per_db",
            "must be positive");
}

double normalized_throughput(const RunMetrics& m, double t_data_ref_s) {
    if (m.sim_time_s <= 0.0) throw std::domain_error("normalized_throughput: sim time");
    return static_cast<double>(m.delivered) * t_data_ref_s / m.sim_time_s;
}

double goodput_bps(const RunMetrics& m) {
    if (m.sim_time_s <= 0.0) throw std::domain_error("goodput: sim time");
    return static_cast<double>(m.delivered_payload_bits) / m.sim_time_s;
}

double goodput_after_warmup_bps(const RunMetrics& m) {
    if (m.warmup_end_time_s < 0.0) return 0.0;
    const double span = m.sim_time_s - m.warmup_end_time_s;
    if (span <= 0.0) return 0.0;
    return static_cast<double>(m.delivered_bits_after_warmup) / span;
}

double pt_ratio(double avg_delay_s, double t_data_s) {
    if (t_data_s <= 0.0) throw std::domain_error("pt_ratio: packet time must be positive");
    return avg_delay_s / t_data_s;
}

}  // namespace uwmac
