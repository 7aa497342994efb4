#include "uwmac/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "uwmac/experiments.hpp"

namespace uwmac::cfg {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "': " + why);
}

void check_keys(const json& obj, const std::string& scope,
                const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (allowed.count(key) == 0) {
            fail(scope.empty() ? key : scope + "." + key, "unknown key");
        }
    }
}

template <typename T>
void read(const json& obj, const std::string& scope, const std::string& key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(scope.empty() ? key : scope + "." + key, e.what());
    }
}

std::vector<std::pair<double, double>> read_trace(const json& arr,
                                                  const std::string& field) {
    std::vector<std::pair<double, double>> out;
    if (!arr.is_array()) fail(field, "expected an array of [time, esnr_db] pairs");
    for (const auto& item : arr) {
        if (!item.is_array() || item.size() != 2) {
            fail(field, "each breakpoint must be a [time, esnr_db] pair");
        }
        out.emplace_back(item[0].get<double>(), item[1].get<double>());
    }
    return out;
}

void parse_channel(const json& j, ScenarioConfig& cfg) {
    check_keys(j, "channel",
               {"esnr_db", "esnr_trace", "esnr_trace_per_node", "esnr_jitter_std_db",
                "forced_per", "detection_prob"});
    if (j.contains("esnr_db") && j.contains("esnr_trace")) {
        fail("channel.esnr_db", "give either a constant or a trace, not both");
    }
    if (j.contains("esnr_db")) {
        cfg.channel.esnr_trace = {{0.0, j.at("esnr_db").get<double>()}};
    }
    if (j.contains("esnr_trace")) {
        cfg.channel.esnr_trace = read_trace(j.at("esnr_trace"), "channel.esnr_trace");
    }
    if (j.contains("esnr_trace_per_node")) {
        for (const auto& [key, value] : j.at("esnr_trace_per_node").items()) {
            int node = 0;
            try {
                node = std::stoi(key);
            } catch (...) {
                fail("channel.esnr_trace_per_node", "node keys must be integers");
            }
            cfg.channel.esnr_trace_per_node[node] =
                read_trace(value, "channel.esnr_trace_per_node." + key);
        }
    }
    read(j, "channel", "esnr_jitter_std_db", cfg.channel.esnr_jitter_std_db);
    if (j.contains("forced_per") && !j.at("forced_per").is_null()) {
        cfg.channel.forced_per = j.at("forced_per").get<double>();
    }
    read(j, "channel", "detection_prob", cfg.channel.detection_prob);
}

void parse_mac(const json& j, ScenarioConfig& cfg) {
    check_keys(j, "mac",
               {"cw_min", "cw_max", "slot_s", "t_other_s", "ack_duration_s",
                "nack_duration_s", "probe_duration_s", "timeout_margin_s", "pause_s",
                "pause_factor", "max_retries", "capture"});
    read(j, "mac", "cw_min", cfg.mac.cw_min);
    read(j, "mac", "cw_max", cfg.mac.cw_max);
    if (j.contains("slot_s") && !j.at("slot_s").is_null()) {
        cfg.mac.slot_s = j.at("slot_s").get<double>();
        cfg.auto_slot = false;
    }
    read(j, "mac", "t_other_s", cfg.mac.t_other_s);
    read(j, "mac", "ack_duration_s", cfg.mac.ack_duration_s);
    if (j.contains("nack_duration_s")) {
        cfg.mac.nack_duration_s = j.at("nack_duration_s").get<double>();
    } else {
        cfg.mac.nack_duration_s = cfg.mac.ack_duration_s;
    }
    if (j.contains("probe_duration_s")) {
        cfg.mac.probe_duration_s = j.at("probe_duration_s").get<double>();
    } else {
        cfg.mac.probe_duration_s = cfg.mac.ack_duration_s;
    }
    read(j, "mac", "timeout_margin_s", cfg.mac.timeout_margin_s);
    if (j.contains("pause_s") && !j.at("pause_s").is_null()) {
        cfg.mac.pause_s = j.at("pause_s").get<double>();
        cfg.auto_pause = false;
    }
    read(j, "mac", "pause_factor", cfg.pause_factor);
    read(j, "mac", "max_retries", cfg.mac.max_retries);
    read(j, "mac", "capture", cfg.mac.capture);
}

void parse_phy(const json& j, ScenarioConfig& cfg) {
    check_keys(j, "phy",
               {"symbol_duration_s", "cp_duration_s", "blocks_per_frame", "data_carriers",
                "pilot_carriers", "subcarriers", "preamble_duration_s",
                "header_duration_s", "frame_overhead_s", "per_target_exponent",
                "per_slope_decades_per_db", "esnr_cap_db", "thresholds_db", "modes"});
    read(j, "phy", "symbol_duration_s", cfg.timing.symbol_duration_s);
    read(j, "phy", "cp_duration_s", cfg.timing.cp_duration_s);
    read(j, "phy", "blocks_per_frame", cfg.timing.blocks_per_frame);
    read(j, "phy", "data_carriers", cfg.timing.data_carriers);
    read(j, "phy", "pilot_carriers", cfg.timing.pilot_carriers);
    read(j, "phy", "subcarriers", cfg.timing.subcarriers);
    read(j, "phy", "preamble_duration_s", cfg.timing.preamble_duration_s);
    read(j, "phy", "header_duration_s", cfg.timing.header_duration_s);
    read(j, "phy", "frame_overhead_s", cfg.timing.frame_overhead_s);
    read(j, "phy", "per_target_exponent", cfg.per_model.target_exponent);
    read(j, "phy", "per_slope_decades_per_db", cfg.per_model.slope_decades_per_db);
    read(j, "phy", "esnr_cap_db", cfg.esnr_cap_db);
    if (j.contains("thresholds_db")) {
        const auto& arr = j.at("thresholds_db");
        if (!arr.is_array() || arr.size() != cfg.thresholds.upper_edges.size()) {
            fail("phy.thresholds_db", "expected exactly 6 boundary values");
        }
        for (std::size_t i = 0; i < cfg.thresholds.upper_edges.size(); ++i) {
            cfg.thresholds.upper_edges[i] = arr[i].get<double>();
        }
    }
    if (j.contains("modes")) {
        const auto& arr = j.at("modes");
        if (!arr.is_array() || arr.empty()) fail("phy.modes", "expected a mode array");
        cfg.modes.clear();
        int index = 1;
        for (const auto& jm : arr) {
            check_keys(jm, "phy.modes",
                       {"bits_per_symbol", "diversity_order", "code_num", "code_den",
                        "data_rate_bps", "modulation"});
            phy::TransmissionMode m;
            m.index = index++;
            read(jm, "phy.modes", "bits_per_symbol", m.bits_per_symbol);
            read(jm, "phy.modes", "diversity_order", m.diversity_order);
            read(jm, "phy.modes", "code_num", m.code_num);
            read(jm, "phy.modes", "code_den", m.code_den);
            read(jm, "phy.modes", "data_rate_bps", m.data_rate_bps);
            read(jm, "phy.modes", "modulation", m.modulation);
            cfg.modes.push_back(std::move(m));
        }
    }
}

void parse_experiments(const json& j, ScenarioConfig& cfg) {
    check_keys(j, "experiments",
               {"loads_pps", "node_counts", "delay_scales", "forced_pers", "esnr_min_db",
                "esnr_max_db", "esnr_step_db", "saturation_load_pps"});
    read(j, "experiments", "loads_pps", cfg.experiments.loads_pps);
    read(j, "experiments", "node_counts", cfg.experiments.node_counts);
    read(j, "experiments", "delay_scales", cfg.experiments.delay_scales);
    read(j, "experiments", "forced_pers", cfg.experiments.forced_pers);
    read(j, "experiments", "esnr_min_db", cfg.experiments.esnr_min_db);
    read(j, "experiments", "esnr_max_db", cfg.experiments.esnr_max_db);
    read(j, "experiments", "esnr_step_db", cfg.experiments.esnr_step_db);
    read(j, "experiments", "saturation_load_pps", cfg.experiments.saturation_load_pps);
}

}  // namespace

ScenarioConfig from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    check_keys(j, "",
               {"nodes", "region_m", "offered_load_pps", "payload_bytes",
                "sim_duration_s", "seed", "mode_policy", "channel", "mac", "phy",
                "sound_speed_mps", "delay_scale", "warmup_deliveries", "experiments"});

    ScenarioConfig cfg;
    read(j, "", "nodes", cfg.node_count);
    read(j, "", "region_m", cfg.region_m);
    read(j, "", "offered_load_pps", cfg.offered_load_pps);
    read(j, "", "payload_bytes", cfg.payload_bytes);
    read(j, "", "sim_duration_s", cfg.sim_duration_s);
    read(j, "", "seed", cfg.seed);
    read(j, "", "sound_speed_mps", cfg.sound_speed_mps);
    read(j, "", "delay_scale", cfg.delay_scale);
    read(j, "", "warmup_deliveries", cfg.warmup_deliveries);

    if (j.contains("mode_policy")) {
        const auto& jp = j.at("mode_policy");
        check_keys(jp, "mode_policy", {"type", "mode"});
        std::string type = "fixed";
        read(jp, "mode_policy", "type", type);
        if (type == "adaptive") {
            cfg.mode_policy.type = ModePolicy::Type::adaptive;
        } else if (type == "fixed") {
            cfg.mode_policy.type = ModePolicy::Type::fixed;
            read(jp, "mode_policy", "mode", cfg.mode_policy.fixed_mode);
        } else {
            fail("mode_policy.type", "must be 'fixed' or 'adaptive'");
        }
    }
    if (j.contains("channel")) parse_channel(j.at("channel"), cfg);
    if (j.contains("mac")) parse_mac(j.at("mac"), cfg);
    if (j.contains("phy")) parse_phy(j.at("phy"), cfg);
    if (j.contains("experiments")) parse_experiments(j.at("experiments"), cfg);

    validate(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string to_json_text(const ScenarioConfig& cfg) {
    json j;
    j["nodes"] = cfg.node_count;
    j["region_m"] = cfg.region_m;
    j["offered_load_pps"] = cfg.offered_load_pps;
    j["payload_bytes"] = cfg.payload_bytes;
    j["sim_duration_s"] = cfg.sim_duration_s;
    j["seed"] = cfg.seed;
    j["sound_speed_mps"] = cfg.sound_speed_mps;
    j["delay_scale"] = cfg.delay_scale;
    j["warmup_deliveries"] = cfg.warmup_deliveries;

    json jp;
    jp["type"] = cfg.mode_policy.type == ModePolicy::Type::adaptive ? "adaptive" : "fixed";
    if (cfg.mode_policy.type == ModePolicy::Type::fixed) {
        jp["mode"] = cfg.mode_policy.fixed_mode;
    }
    j["mode_policy"] = jp;

    json jc;
    jc["esnr_trace"] = cfg.channel.esnr_trace;
    if (!cfg.channel.esnr_trace_per_node.empty()) {
        json per;
        for (const auto& [node, trace] : cfg.channel.esnr_trace_per_node) {
            per[std::to_string(node)] = trace;
        }
        jc["esnr_trace_per_node"] = per;
    }
    jc["esnr_jitter_std_db"] = cfg.channel.esnr_jitter_std_db;
    if (cfg.channel.forced_per) jc["forced_per"] = *cfg.channel.forced_per;
    jc["detection_prob"] = cfg.channel.detection_prob;
    j["channel"] = jc;

    json jm;
    jm["cw_min"] = cfg.mac.cw_min;
    jm["cw_max"] = cfg.mac.cw_max;
    if (!cfg.auto_slot) jm["slot_s"] = cfg.mac.slot_s;
    jm["t_other_s"] = cfg.mac.t_other_s;
    jm["ack_duration_s"] = cfg.mac.ack_duration_s;
    jm["nack_duration_s"] = cfg.mac.nack_duration_s;
    jm["probe_duration_s"] = cfg.mac.probe_duration_s;
    jm["timeout_margin_s"] = cfg.mac.timeout_margin_s;
    if (!cfg.auto_pause) jm["pause_s"] = cfg.mac.pause_s;
    jm["pause_factor"] = cfg.pause_factor;
    jm["max_retries"] = cfg.mac.max_retries;
    jm["capture"] = cfg.mac.capture;
    j["mac"] = jm;

    json jy;
    jy["symbol_duration_s"] = cfg.timing.symbol_duration_s;
    jy["cp_duration_s"] = cfg.timing.cp_duration_s;
    jy["blocks_per_frame"] = cfg.timing.blocks_per_frame;
    jy["data_carriers"] = cfg.timing.data_carriers;
    jy["pilot_carriers"] = cfg.timing.pilot_carriers;
    jy["subcarriers"] = cfg.timing.subcarriers;
    jy["preamble_duration_s"] = cfg.timing.preamble_duration_s;
    jy["header_duration_s"] = cfg.timing.header_duration_s;
    jy["frame_overhead_s"] = cfg.timing.frame_overhead_s;
    jy["per_target_exponent"] = cfg.per_model.target_exponent;
    jy["per_slope_decades_per_db"] = cfg.per_model.slope_decades_per_db;
    jy["esnr_cap_db"] = cfg.esnr_cap_db;
    jy["thresholds_db"] = cfg.thresholds.upper_edges;
    json jmodes = json::array();
    for (const auto& m : cfg.modes) {
        json one;
        one["bits_per_symbol"] = m.bits_per_symbol;
        one["diversity_order"] = m.diversity_order;
        one["code_num"] = m.code_num;
        one["code_den"] = m.code_den;
        one["data_rate_bps"] = m.data_rate_bps;
        one["modulation"] = m.modulation;
        jmodes.push_back(one);
    }
    jy["modes"] = jmodes;
    j["phy"] = jy;

    json je;
    je["loads_pps"] = cfg.experiments.loads_pps;
    je["node_counts"] = cfg.experiments.node_counts;
    je["delay_scales"] = cfg.experiments.delay_scales;
    je["forced_pers"] = cfg.experiments.forced_pers;
    je["esnr_min_db"] = cfg.experiments.esnr_min_db;
    je["esnr_max_db"] = cfg.experiments.esnr_max_db;
    je["esnr_step_db"] = cfg.experiments.esnr_step_db;
    je["saturation_load_pps"] = cfg.experiments.saturation_load_pps;
    j["experiments"] = je;

    return j.dump();
}

}  // namespace uwmac::cfg

namespace uwmac::exp {

std::string config_to_json(const ScenarioConfig& cfg) {
    return cfg::to_json_text(cfg);
}

}  // namespace uwmac::exp
