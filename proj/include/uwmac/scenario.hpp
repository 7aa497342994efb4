#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uwmac/mac.hpp"
#include "uwmac/medium.hpp"
#include "uwmac/phy_model.hpp"

namespace uwmac {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ModePolicy {
    enum class Type { fixed, adaptive };
    Type type = Type::fixed;
    int fixed_mode = 1;
};

struct ChannelConfig {
    std::vector<std::pair<double, double>> esnr_trace{{0.0, 10.0}};  // (t, dB)
    std::map<int, std::vector<std::pair<double, double>>> esnr_trace_per_node;
    double esnr_jitter_std_db = 0.0;
    std::optional<double> forced_per;
    double detection_prob = 1.0;
};

struct ExperimentGrids {
    std::vector<double> loads_pps{0.02, 0.04, 0.07, 0.10, 0.14, 0.20, 0.30};
    std::vector<int> node_counts{2, 5, 10};
    std::vector<double> delay_scales{0.5, 1.0, 2.0, 4.0};
    std::vector<double> forced_pers{0.0, 0.01, 0.05, 0.1, 0.2};
    double esnr_min_db = -2.0;
    double esnr_max_db = 15.0;
    double esnr_step_db = 1.0;
    double saturation_load_pps = 0.3;
};

// Full description of one experiment: topology, traffic, PHY/MAC parameters,
// channel model and seed. Seed-complete: a config plus its seed reproduces a
// run bit for bit.
struct ScenarioConfig {
    int node_count = 1;         // senders; the sink is extra, at the center
    double region_m = 1000.0;
    double offered_load_pps = 0.1;  // aggregate, split evenly across senders
    int payload_bytes = 400;
    double sim_duration_s = 2000.0;
    std::uint64_t seed = 1;
    ModePolicy mode_policy;
    ChannelConfig channel;
    mac::Params mac;            // slot_s <= 0 selects the max one-way delay
    phy::OfdmTiming timing;
    phy::PerModel per_model;
    phy::ModeThresholds thresholds;
    double esnr_cap_db = 60.0;
    std::vector<phy::TransmissionMode> modes = phy::mode_table();
    double sound_speed_mps = 1500.0;
    double delay_scale = 1.0;
    int warmup_deliveries = 10;
    double pause_factor = 10.0;  // pause = factor x mode-1 packet duration
    bool auto_slot = true;
    bool auto_pause = true;
    ExperimentGrids experiments;
};

// Throws ConfigError naming the offending field.
void validate(const ScenarioConfig& cfg);

// Counters and derived statistics for one run.
struct RunMetrics {
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t collisions = 0;        // collision groups detected at the sink
    std::uint64_t collided_frames = 0;   // data frames lost inside those groups
    std::uint64_t missed_frames = 0;     // undetected or deaf arrivals
    std::uint64_t channel_losses = 0;    // decode failures answered with NACK1
    std::uint64_t retransmissions = 0;
    std::uint64_t probes = 0;
    std::uint64_t delivered_payload_bits = 0;
    double sim_time_s = 0.0;
    std::array<std::uint64_t, 7> tx_per_mode{};
    std::array<std::uint64_t, 7> delivered_per_mode{};
    std::uint64_t assert_violations = 0;
    std::uint64_t in_flight_end = 0;  // queued or in service when time ran out
    // Warm-up view: goodput excluding the first warmup_deliveries packets.
    std::uint64_t warmup_target = 0;
    double warmup_end_time_s = -1.0;  // < 0 when warm-up never completed
    std::uint64_t delivered_bits_after_warmup = 0;
    std::vector<std::uint64_t> generated_per_node;
    std::vector<std::uint64_t> delivered_per_node;
    std::vector<std::uint64_t> dropped_per_node;

    bool conserved() const { return generated == delivered + dropped + in_flight_end; }
};

// Fraction of simulated time occupied by successfully delivered data airtime.
double normalized_throughput(const RunMetrics& m, double t_data_ref_s);

// Successfully delivered payload bits per second.
double goodput_bps(const RunMetrics& m);

// Goodput over the post-warm-up window; exactly zero when the warm-up never
// completed.
double goodput_after_warmup_bps(const RunMetrics& m);

// PT-ratio: average propagation delay over packet transmission time.
double pt_ratio(double avg_delay_s, double t_data_s);

}  // namespace uwmac
