#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "uwmac/acoustics.hpp"
#include "uwmac/mac.hpp"
#include "uwmac/phy_model.hpp"
#include "uwmac/sim_core.hpp"

namespace uwmac::medium {

enum class FrameKind { data, ack, nack1, nack2, control };

const char* to_string(FrameKind k);

// Decoded header contents; busy_duration is the NAV field and always equals
// the sender's t_busy computation at transmit time.
struct HeaderInfo {
    int source = 0;
    int destination = 0;
    int mode = 0;
    int payload_bytes = 0;
    double busy_duration_s = 0.0;
};

struct AirFrame {
    FrameKind kind = FrameKind::data;
    int sender = 0;
    int addressee = 0;  // -1 = broadcast
    int mode = 1;       // 0..6
    double tx_start_s = 0.0;
    double duration_s = 0.0;
    HeaderInfo header;
    int payload_bytes = 0;
    std::uint64_t packet_id = 0;
    double esnr_feedback_db = 0.0;  // carried by ACKs
    std::uint64_t frame_seq = 0;    // assigned by the medium
};

// Piecewise-constant ESNR source: value at t is the last breakpoint at or
// before t (the first breakpoint also covers earlier times).
struct EsnrProcess {
    std::vector<std::pair<double, double>> points;  // (time, esnr_dB), sorted
    double at(double t) const;
};

// Channel abstraction parameters for one run.
struct ChannelModel {
    EsnrProcess global;
    std::map<int, EsnrProcess> per_link;  // keyed by sender node, optional
    double esnr_jitter_std_db = 0.0;
    std::optional<double> forced_per;
    double detection_prob = 1.0;
    double preamble_duration_s = 0.040;
    phy::PerModel per;
    phy::ModeThresholds thresholds;
    double esnr_cap_db = 60.0;
    bool capture = false;
};

// Star layout: node 0 is the sink at the region center, senders 1..N are
// uniform over the square.
struct Topology {
    std::vector<acoustics::Vec2> positions;
    double sound_speed_mps = 1500.0;
    double delay_scale = 1.0;

    int node_count() const { return static_cast<int>(positions.size()); }
    double delay(int a, int b) const;
    double max_sender_delay() const;
    double avg_sender_delay() const;
};

Topology make_star_topology(int sender_count, double region_m, double sound_speed_mps,
                            double delay_scale, sim::RngStream& placement);

// How a second arrival relates to an ongoing reception.
enum class OverlapClass { sequential, collision, near_synchronous };

// Pure interval rule shared with the chirp-level predicate: offsets inside
// one preamble merge (missed detection), offsets inside the first packet's
// duration collide, later offsets are separate receptions.
OverlapClass classify_offset(double offset_s, double first_duration_s,
                             double preamble_duration_s);

struct Callbacks {
    // Header overheard by a third party at arrival start (virtual carrier
    // sensing input).
    std::function<void(int node, const HeaderInfo&)> on_overhear;
    // Resolution of a data frame at its addressee.
    std::function<void(int node, const AirFrame&, const mac::ReceptionOutcome&)>
        on_data_outcome;
    // Control frame (ACK/NACK/probe) delivered to this node.
    std::function<void(int node, const AirFrame&)> on_control;
    // Protected-control assumption violated (two control frames overlapped).
    std::function<void()> on_assert_violation;
};

/**
 * Half-duplex shared acoustic channel.
 *
 * propagate() fans a frame out as arrival-start/arrival-end events at every
 * other node with per-link delay. Each node tracks its own overlap groups;
 * at the addressee a data frame resolves into exactly one outcome:
 * decoded / preamble_only / collision_detected / missed. Senders are deaf
 * while transmitting: frames starting mid-transmission are missed, a
 * transmission starting mid-reception corrupts it, and an undetected frame
 * still arriving jams the payload of whatever comes next. Control frames
 * are treated as protected: they bypass overlap bookkeeping, but a
 * control/control overlap at any node trips the assertion callback.
 */
class Medium {
public:
    Medium(sim::Scheduler& sched, const Topology& topo, ChannelModel channel,
           Callbacks callbacks, sim::RngStream channel_rng);

    // Fans the frame out to every node except the (deaf) sender; call at the
    // frame's tx_start.
    void propagate(AirFrame frame);

    // ESNR of the sender->sink link at time t (no estimation jitter).
    double esnr_sample(int sender, double t) const;
    // ESNR as the receiver would report it (estimation jitter applied).
    double reported_esnr(int sender, double t);

    bool sender_busy(int node, double t) const;
    double sender_busy_until(int node) const;

private:
    struct PendingFrame {
        AirFrame frame;
        double arr_start = 0.0;
        double arr_end = 0.0;
        bool detected = true;
        bool corrupted = false;   // receiver transmitted during the arrival
        bool interfered = false;  // an undetected frame was still on the water
        bool done = false;
    };
    struct RxGroup {
        std::vector<PendingFrame> members;
        bool collided = false;
        bool merged = false;  // preamble detect failure, everything missed
        double group_end = 0.0;
    };
    struct NodeChannel {
        std::vector<RxGroup> groups;
        double tx_begin = 0.0;
        double tx_until = -1.0;
        double ctrl_rx_until = -1.0;
        double deaf_until = -1.0;  // latest arrival end among deaf frames
        std::unordered_set<std::uint64_t> deaf_frames;
    };

    void arrival_start(int node, const AirFrame& frame, double arr_end);
    void arrival_end(int node, const AirFrame& frame);
    void resolve_data_end(int node, PendingFrame& member, RxGroup& group);

    sim::Scheduler& sched_;
    const Topology& topo_;
    ChannelModel channel_;
    Callbacks cb_;
    sim::RngStream rng_;
    std::vector<NodeChannel> nodes_;
    std::uint64_t next_frame_seq_ = 1;
};

}  // namespace uwmac::medium
