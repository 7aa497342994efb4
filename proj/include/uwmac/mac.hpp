#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwmac/phy_model.hpp"
#include "uwmac/sim_core.hpp"

namespace uwmac::mac {

// Raised on an event that is not legal in the node's current phase; a test
// hook for the exhaustive transition table.
class ProtocolViolation : public std::logic_error {
public:
    explicit ProtocolViolation(const std::string& what) : std::logic_error(what) {}
};

// Channel reservation announced in every data header (NAV field):
//   T_busy = T_data + T_ack + 2 T_delay + T_other
double t_busy(double t_data_s, double t_ack_s, double t_delay_s, double t_other_s);

// ACK-wait timer measured from the start of transmission. The protocol never
// pins this down, so it is the worst-case round trip plus a safety margin.
double timeout_value(double t_data_s, double max_delay_s, double t_ack_s,
                     double t_other_s, double margin_s = 0.1);

enum class Phase { idle, backoff, deferring, transmitting, awaiting_ack, paused };

enum class EventKind {
    packet_ready,
    channel_busy,
    nav_expired,
    backoff_slot_tick,
    tx_done,
    ack,
    nack1,
    nack2,
    timeout,
    pause_over,
};

struct PacketDesc {
    std::uint64_t id = 0;
    int payload_bytes = 0;
    double created_at_s = 0.0;
};

struct Event {
    EventKind kind;
    double busy_duration_s = 0.0;          // channel_busy
    double esnr_db = 0.0;                  // ack
    std::optional<PacketDesc> packet = {}; // packet_ready
};

enum class TimerId { backoff_slot, tx_end, ack_timeout, nav, pause };

enum class ActionKind {
    start_transmission,
    set_timer,
    cancel_timer,
    set_nav,
    drop_packet,
    record_metric,
};

enum class Metric { retransmission, probe_sent, pause_entered, ack_received };

struct Action {
    ActionKind kind;
    TimerId timer = TimerId::backoff_slot;  // set_timer / cancel_timer
    double duration_s = 0.0;                // timer or NAV remaining time
    // start_transmission:
    bool is_probe = false;
    int mode = 0;
    int payload_bytes = 0;
    std::uint64_t packet_id = 0;
    double tx_duration_s = 0.0;
    double busy_duration_s = 0.0;  // NAV field carried in the header
    Metric metric = Metric::retransmission;
};

// Protocol constants for one run. slot_s, max_delay_s and pause_s are filled
// in from the scenario before the first event.
struct Params {
    int cw_min = 4;
    int cw_max = 64;
    double slot_s = 0.5;
    double t_other_s = 0.1;
    double ack_duration_s = 0.5;
    double nack_duration_s = 0.5;
    double probe_duration_s = 0.5;
    double timeout_margin_s = 0.1;
    double pause_s = 53.6;
    int max_retries = 3;
    bool capture = false;
    double max_delay_s = 0.5;
    // false = layered baseline: ESNR feedback is ignored, NACK1 retransmits
    // at the same rate, and the node never pauses at mode 0.
    bool adaptive = true;
};

// Per-run context handed to the transition function: packet timing and the
// mode-selection thresholds.
struct Context {
    std::function<double(int mode, int payload_bytes)> data_duration;
    phy::ModeThresholds thresholds;
};

struct NodeState {
    Phase phase = Phase::idle;
    int cw = 4;
    int backoff_remaining = 0;
    bool nav_active = false;
    double nav_until_s = 0.0;
    int retries = 0;
    int current_mode = 1;
    double last_esnr_db = 0.0;
    bool has_esnr = false;
    std::deque<PacketDesc> queue;
    std::optional<PacketDesc> current;
    bool current_is_probe = false;
    double measured_delay_s = 0.0;
};

struct StepResult {
    NodeState state;
    std::vector<Action> actions;
};

/**
 * Sender state machine for the modified CSMA/CA protocol.
 *
 * Pure transition function: mutation of timers, the medium and metrics is
 * described by the returned actions and executed by the caller. Reactions:
 *   ack    -> reset retries and cw, adopt the mode selected by the fed-back
 *             ESNR (mode 0 pauses the node), move to the next packet;
 *   nack1  -> one mode lower (floor 1) and immediate retransmission with no
 *             backoff;
 *   nack2 / timeout -> double cw up to cw_max, redraw backoff, same mode;
 *   any 4th consecutive failure drops the packet.
 * Overheard headers set the NAV and freeze a running backoff countdown.
 */
StepResult sender_step(const NodeState& state, const Event& event, double now_s,
                       sim::RngStream& rng, const Params& params, const Context& ctx);

// What the medium resolved a data reception into.
struct ReceptionOutcome {
    enum class Kind { decoded, preamble_only, collision_detected, missed };
    Kind kind = Kind::missed;
    double esnr_db = 0.0;     // decoded: ESNR to feed back
    bool primary = true;      // false for covered members of a collision group
    bool first_decoded = false;  // capture corner case
};

struct Response {
    enum class Kind { ack, nack1, nack2, none };
    Kind kind = Kind::none;
    int addressee = -1;  // -1 = broadcast
    double esnr_db = 0.0;
};

// Receiver reaction: decoded -> unicast ACK with ESNR; preamble without a
// payload -> NACK1; detected collision -> broadcast NACK2 (or, with capture
// enabled and the first packet decoded, a unicast ACK to its sender);
// missed -> silence.
Response receiver_step(const ReceptionOutcome& outcome, int sender_id,
                       bool capture_enabled = false);

const char* to_string(Phase p);
const char* to_string(EventKind k);
const char* to_string(ActionKind k);
const char* to_string(TimerId t);
std::string describe(const Action& a);

}  // namespace uwmac::mac
