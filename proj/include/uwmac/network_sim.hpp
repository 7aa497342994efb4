#pragma once

#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "uwmac/mac.hpp"
#include "uwmac/medium.hpp"
#include "uwmac/scenario.hpp"
#include "uwmac/sim_core.hpp"

namespace uwmac {

struct TransitionRecord {
    double time_s;
    int node;
    mac::Phase phase_before;
    mac::EventKind event;
    mac::Phase phase_after;
    std::string actions;
};

/**
 * One seeded simulation run of the star network.
 *
 * Owns the scheduler, the medium and one MAC driver per sender; the sink
 * node responds per the receiver logic. A run is strictly single-threaded;
 * parallelism lives one level up, across replications.
 */
class NetworkSim {
public:
    explicit NetworkSim(ScenarioConfig cfg, bool record_trace = false);
    ~NetworkSim();
    NetworkSim(const NetworkSim&) = delete;
    NetworkSim& operator=(const NetworkSim&) = delete;

    const RunMetrics& run();

    const RunMetrics& metrics() const { return metrics_; }
    const std::vector<TransitionRecord>& trace() const { return trace_; }
    const medium::Topology& topology() const { return topo_; }
    const ScenarioConfig& config() const { return cfg_; }
    double data_duration(int mode) const;  // for the configured payload
    double avg_propagation_delay() const { return topo_.avg_sender_delay(); }

private:
    struct NodeDriver;
    void generate_next_arrival();
    void on_data_outcome(int node, const medium::AirFrame& frame,
                         const mac::ReceptionOutcome& outcome);
    void send_response(const mac::Response& response, const medium::AirFrame& cause);

    ScenarioConfig cfg_;
    bool record_trace_;
    sim::Scheduler sched_;
    medium::Topology topo_;
    std::unique_ptr<medium::Medium> medium_;
    std::vector<std::unique_ptr<NodeDriver>> nodes_;  // senders, 1..N
    sim::RngStream traffic_rng_;
    RunMetrics metrics_;
    std::vector<TransitionRecord> trace_;
    std::unordered_set<std::uint64_t> delivered_ids_;
    double next_arrival_s = 0.0;
    std::uint64_t next_packet_id_ = 1;
    double sink_tx_until_ = 0.0;
    bool ran_ = false;
};

// Convenience: build, run, return the metrics.
RunMetrics run_scenario(const ScenarioConfig& cfg);

// R independent replications with seeds cfg.seed + 0 .. cfg.seed + R-1,
// merged in replication order. The serial version is the reference; the
// OpenMP version distributes replications over threads and produces
// identical results.
std::vector<RunMetrics> run_replications_serial(const ScenarioConfig& cfg, int reps);
std::vector<RunMetrics> run_replications(const ScenarioConfig& cfg, int reps);

}  // namespace uwmac
