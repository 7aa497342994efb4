#include "uwmac/mac.hpp"

#include <algorithm>
#include <cmath>

namespace uwmac::mac {

double t_busy(double t_data_s, double t_ack_s, double t_delay_s, double t_other_s) {
    return t_data_s + t_ack_s + 2.0 * t_delay_s + t_other_s;
}

double timeout_value(double t_data_s, double max_delay_s, double t_ack_s,
                     double t_other_s, double margin_s) {
    return t_data_s + 2.0 * max_delay_s + t_ack_s + t_other_s + margin_s;
}

namespace {

Action make_timer(TimerId id, double duration_s) {
    Action a{ActionKind::set_timer};
    a.timer = id;
    a.duration_s = duration_s;
    return a;
}

Action cancel_timer(TimerId id) {
    Action a{ActionKind::cancel_timer};
    a.timer = id;
    return a;
}

Action metric(Metric m) {
    Action a{ActionKind::record_metric};
    a.metric = m;
    return a;
}

[[noreturn]] void violation(const NodeState& st, const Event& ev) {
    throw ProtocolViolation(std::string("illegal event ") + to_string(ev.kind) +
                            " in phase " + to_string(st.phase));
}

// Everything below mutates a working copy of the state and appends actions.
struct Machine {
    NodeState& st;
    std::vector<Action>& actions;
    double now;
    sim::RngStream& rng;
    const Params& p;
    const Context& ctx;

    void start_transmission() {
        st.phase = Phase::transmitting;
        Action a{ActionKind::start_transmission};
        a.is_probe = st.current_is_probe;
        a.mode = st.current_mode;
        if (st.current_is_probe) {
            a.tx_duration_s = p.probe_duration_s;
            a.payload_bytes = 0;
            actions.push_back(metric(Metric::probe_sent));
        } else {
            a.payload_bytes = st.current->payload_bytes;
            a.packet_id = st.current->id;
            a.tx_duration_s = ctx.data_duration(st.current_mode, a.payload_bytes);
            if (st.retries > 0) actions.push_back(metric(Metric::retransmission));
        }
        a.busy_duration_s =
            t_busy(a.tx_duration_s, p.ack_duration_s, st.measured_delay_s, p.t_other_s);
        actions.push_back(a);
        actions.push_back(make_timer(TimerId::tx_end, a.tx_duration_s));
    }

    // Draw a fresh backoff and either wait out the NAV, count down, or (on a
    // zero draw with a quiet channel) transmit at once.
    void begin_contention() {
        st.backoff_remaining = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(st.cw)));
        resume_contention();
    }

    void resume_contention() {
        if (st.nav_active) {
            st.phase = Phase::deferring;
        } else if (st.backoff_remaining == 0) {
            start_transmission();
        } else {
            st.phase = Phase::backoff;
            actions.push_back(make_timer(TimerId::backoff_slot, p.slot_s));
        }
    }

    void next_packet_or_idle() {
        st.current.reset();
        st.current_is_probe = false;
        if (!st.queue.empty()) {
            st.current = st.queue.front();
            st.queue.pop_front();
            begin_contention();
        } else {
            st.phase = Phase::idle;
        }
    }

    void enter_pause() {
        st.phase = Phase::paused;
        st.current_mode = 0;
        st.current.reset();
        st.current_is_probe = false;
        actions.push_back(metric(Metric::pause_entered));
        actions.push_back(make_timer(TimerId::pause, p.pause_s));
    }

    void drop_current() {
        Action a{ActionKind::drop_packet};
        a.packet_id = st.current->id;
        actions.push_back(a);
        st.retries = 0;
        st.cw = p.cw_min;
        next_packet_or_idle();
    }

    // Shared failure handling. NACK1 means channel loss: step the mode down
    // and retransmit immediately. NACK2/timeout mean contention: double the
    // window and redraw the backoff at the same mode.
    void handle_failure(bool collision_like) {
        actions.push_back(cancel_timer(TimerId::ack_timeout));
        if (st.current_is_probe) {
            enter_pause();
            return;
        }
        if (st.retries >= p.max_retries) {
            drop_current();
            return;
        }
        ++st.retries;
        if (collision_like) {
            st.cw = std::min(2 * st.cw, p.cw_max);
            begin_contention();
        } else {
            if (p.adaptive) st.current_mode = std::max(1, st.current_mode - 1);
            st.backoff_remaining = 0;
            if (st.nav_active) {
                st.phase = Phase::deferring;
            } else {
                start_transmission();
            }
        }
    }

    void set_nav(double busy_duration_s) {
        st.nav_active = true;
        st.nav_until_s = std::max(st.nav_until_s, now + busy_duration_s);
        Action a{ActionKind::set_nav};
        a.duration_s = st.nav_until_s - now;
        actions.push_back(a);
    }
};

}  // namespace

StepResult sender_step(const NodeState& state, const Event& event, double now_s,
                       sim::RngStream& rng, const Params& params, const Context& ctx) {
    StepResult result{state, {}};
    NodeState& st = result.state;
    Machine m{st, result.actions, now_s, rng, params, ctx};

    switch (event.kind) {
        case EventKind::packet_ready: {
            if (!event.packet) violation(st, event);
            st.queue.push_back(*event.packet);
            if (st.phase == Phase::idle) m.next_packet_or_idle();
            break;
        }
        case EventKind::channel_busy: {
            if (st.phase == Phase::transmitting) violation(st, event);  // half-duplex
            m.set_nav(event.busy_duration_s);
            if (st.phase == Phase::backoff) {
                result.actions.push_back(cancel_timer(TimerId::backoff_slot));
                st.phase = Phase::deferring;
            }
            break;
        }
        case EventKind::nav_expired: {
            if (st.phase == Phase::transmitting || st.phase == Phase::backoff ||
                !st.nav_active) {
                violation(st, event);
            }
            st.nav_active = false;
            if (st.phase == Phase::deferring) {
                if (st.backoff_remaining == 0) {
                    m.start_transmission();
                } else {
                    st.phase = Phase::backoff;
                    result.actions.push_back(make_timer(TimerId::backoff_slot, params.slot_s));
                }
            }
            break;
        }
        case EventKind::backoff_slot_tick: {
            if (st.phase != Phase::backoff || st.backoff_remaining <= 0) violation(st, event);
            --st.backoff_remaining;
            if (st.backoff_remaining == 0) {
                m.start_transmission();
            } else {
                result.actions.push_back(make_timer(TimerId::backoff_slot, params.slot_s));
            }
            break;
        }
        case EventKind::tx_done: {
            if (st.phase != Phase::transmitting) violation(st, event);
            st.phase = Phase::awaiting_ack;
            const double tx_s = st.current_is_probe
                                    ? params.probe_duration_s
                                    : ctx.data_duration(st.current_mode,
                                                        st.current->payload_bytes);
            const double wait = timeout_value(tx_s, params.max_delay_s,
                                              params.ack_duration_s, params.t_other_s,
                                              params.timeout_margin_s) -
                                tx_s;
            result.actions.push_back(make_timer(TimerId::ack_timeout, wait));
            break;
        }
        case EventKind::ack: {
            if (st.phase != Phase::awaiting_ack) violation(st, event);
            result.actions.push_back(cancel_timer(TimerId::ack_timeout));
            result.actions.push_back(metric(Metric::ack_received));
            st.retries = 0;
            st.cw = params.cw_min;
            st.last_esnr_db = event.esnr_db;
            st.has_esnr = true;
            // Static star: the measured delay does not drift, so the
            // refresh after a first-time success keeps its value.
            st.measured_delay_s = st.measured_delay_s;
            if (!params.adaptive) {
                m.next_packet_or_idle();
                break;
            }
            const int mode = phy::select_mode(event.esnr_db, ctx.thresholds);
            if (mode == 0) {
                m.enter_pause();
            } else {
                st.current_mode = mode;
                m.next_packet_or_idle();
            }
            break;
        }
        case EventKind::nack1: {
            if (st.phase != Phase::awaiting_ack) violation(st, event);
            m.handle_failure(false);
            break;
        }
        case EventKind::nack2: {
            // Broadcast: only a sender waiting on its own frame reacts.
            if (st.phase == Phase::transmitting) violation(st, event);
            if (st.phase == Phase::awaiting_ack) m.handle_failure(true);
            break;
        }
        case EventKind::timeout: {
            if (st.phase != Phase::awaiting_ack) violation(st, event);
            m.handle_failure(true);
            break;
        }
        case EventKind::pause_over: {
            if (st.phase != Phase::paused) violation(st, event);
            st.current_is_probe = true;
            st.current_mode = 1;  // probe at the most robust mode
            m.begin_contention();
            break;
        }
    }
    return result;
}

Response receiver_step(const ReceptionOutcome& outcome, int sender_id,
                       bool capture_enabled) {
    switch (outcome.kind) {
        case ReceptionOutcome::Kind::decoded:
            return Response{Response::Kind::ack, sender_id, outcome.esnr_db};
        case ReceptionOutcome::Kind::preamble_only:
            return Response{Response::Kind::nack1, sender_id, 0.0};
        case ReceptionOutcome::Kind::collision_detected:
            if (!outcome.primary) return Response{Response::Kind::none, -1, 0.0};
            if (capture_enabled && outcome.first_decoded) {
                return Response{Response::Kind::ack, sender_id, outcome.esnr_db};
            }
            return Response{Response::Kind::nack2, -1, 0.0};
        case ReceptionOutcome::Kind::missed:
            return Response{Response::Kind::none, -1, 0.0};
    }
    return Response{Response::Kind::none, -1, 0.0};
}

const char* to_string(Phase p) {
    switch (p) {
        case Phase::idle: return "idle";
        case Phase::backoff: return "backoff";
        case Phase::deferring: return "deferring";
        case Phase::transmitting: return "transmitting";
        case Phase::awaiting_ack: return "awaiting_ack";
        case Phase::paused: return "paused";
    }
    return "?";
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::packet_ready: return "packet_ready";
        case EventKind::channel_busy: return "channel_busy";
        case EventKind::nav_expired: return "nav_expired";
        case EventKind::backoff_slot_tick: return "backoff_slot_tick";
        case EventKind::tx_done: return "tx_done";
        case EventKind::ack: return "ack";
        case EventKind::nack1: return "nack1";
        case EventKind::nack2: return "nack2";
        case EventKind::timeout: return "timeout";
        case EventKind::pause_over: return "pause_over";
    }
    return "?";
}

const char* to_string(ActionKind k) {
    switch (k) {
        case ActionKind::start_transmission: return "start_transmission";
        case ActionKind::set_timer: return "set_timer";
        case ActionKind::cancel_timer: return "cancel_timer";
        case ActionKind::set_nav: return "set_nav";
        case ActionKind::drop_packet: return "drop_packet";
        case ActionKind::record_metric: return "record_metric";
    }
    return "?";
}

const char* to_string(TimerId t) {
    switch (t) {
        case TimerId::backoff_slot: return "backoff_slot";
        case TimerId::tx_end: return "tx_end";
        case TimerId::ack_timeout: return "ack_timeout";
        case TimerId::nav: return "nav";
        case TimerId::pause: return "pause";
    }
    return "?";
}

std::string describe(const Action& a) {
    std::string s = to_string(a.kind);
    switch (a.kind) {
        case ActionKind::set_timer:
        case ActionKind::cancel_timer:
            s += std::string("(") + to_string(a.timer) + ")";
            break;
        case ActionKind::start_transmission:
            s += a.is_probe ? "(probe)" : "(mode " + std::to_string(a.mode) + ")";
            break;
        default:
            break;
    }
    return s;
}

}  // namespace uwmac::mac
