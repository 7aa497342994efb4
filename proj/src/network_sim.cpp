#include "uwmac/network_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_set>

namespace uwmac {

namespace {

// Stream layout per run: 0 traffic, 1..N per-node MAC, N+1 channel,
// N+2 placement.
constexpr std::uint64_t kTrafficStream = 0;
constexpr std::uint64_t kChannelOffset = 1;
constexpr std::uint64_t kPlacementOffset = 2;

mac::Event event_for_timer(mac::TimerId id) {
    switch (id) {
        case mac::TimerId::backoff_slot: return {mac::EventKind::backoff_slot_tick};
        case mac::TimerId::tx_end: return {mac::EventKind::tx_done};
        case mac::TimerId::ack_timeout: return {mac::EventKind::timeout};
        case mac::TimerId::nav: return {mac::EventKind::nav_expired};
        case mac::TimerId::pause: return {mac::EventKind::pause_over};
    }
    return {mac::EventKind::timeout};
}

}  // namespace

struct NetworkSim::NodeDriver {
    NetworkSim* sim;
    int id;  // 1..N
    mac::NodeState state;
    sim::RngStream rng;
    mac::Params params;
    mac::Context ctx;
    std::array<std::optional<sim::EventHandle>, 5> timers;

    void deliver(const mac::Event& ev) {
        const mac::Phase before = state.phase;
        mac::StepResult result = mac::sender_step(state, ev, sim->sched_.now(), rng,
                                                  params, ctx);
        state = std::move(result.state);
        if (sim->record_trace_) {
            std::string acts;
            for (const auto& a : result.actions) {
                if (!acts.empty()) acts += ' ';
                acts += mac::describe(a);
            }
            sim->trace_.push_back({sim->sched_.now(), id, before, ev.kind, state.phase,
                                   std::move(acts)});
        }
        for (const auto& a : result.actions) execute(a);
    }

    void set_timer(mac::TimerId tid, double duration) {
        cancel_timer(tid);
        const auto idx = static_cast<std::size_t>(tid);
        timers[idx] = sim->sched_.schedule(
            sim->sched_.now() + duration, [this, tid] {
                timers[static_cast<std::size_t>(tid)].reset();
                deliver(event_for_timer(tid));
            });
    }

    void cancel_timer(mac::TimerId tid) {
        const auto idx = static_cast<std::size_t>(tid);
        if (timers[idx]) {
            sim->sched_.cancel(*timers[idx]);
            timers[idx].reset();
        }
    }

    void execute(const mac::Action& a) {
        switch (a.kind) {
            case mac::ActionKind::set_timer:
                set_timer(a.timer, a.duration_s);
                break;
            case mac::ActionKind::cancel_timer:
                cancel_timer(a.timer);
                break;
            case mac::ActionKind::set_nav:
                set_timer(mac::TimerId::nav, a.duration_s);
                break;
            case mac::ActionKind::start_transmission: {
                medium::AirFrame f;
                f.kind = a.is_probe ? medium::FrameKind::control : medium::FrameKind::data;
                f.sender = id;
                f.addressee = 0;  // star: everything goes to the sink
                f.mode = a.mode;
                f.tx_start_s = sim->sched_.now();
                f.duration_s = a.tx_duration_s;
                f.payload_bytes = a.payload_bytes;
                f.packet_id = a.packet_id;
                f.header = {id, 0, a.mode, a.payload_bytes, a.busy_duration_s};
                if (!a.is_probe) {
                    sim->metrics_.tx_per_mode[static_cast<std::size_t>(a.mode)]++;
                }
                sim->medium_->propagate(f);
                break;
            }
            case mac::ActionKind::drop_packet: {
                auto& m = sim->metrics_;
                if (sim->delivered_ids_.count(a.packet_id) == 0) {
                    m.dropped++;
                    m.dropped_per_node[static_cast<std::size_t>(id)]++;
                }
                break;
            }
            case mac::ActionKind::record_metric: {
                auto& m = sim->metrics_;
                switch (a.metric) {
                    case mac::Metric::retransmission: m.retransmissions++; break;
                    case mac::Metric::probe_sent: m.probes++; break;
                    case mac::Metric::pause_entered: break;
                    case mac::Metric::ack_received: break;
                }
                break;
            }
        }
    }

    // Control frames are matched against the outstanding transmission, so a
    // stale ACK left over from a broadcast-NACK2 race is ignored instead of
    // tripping the state machine.
    void on_control(const medium::AirFrame& f) {
        const bool awaiting = state.phase == mac::Phase::awaiting_ack;
        switch (f.kind) {
            case medium::FrameKind::ack: {
                const bool matches =
                    awaiting && ((state.current_is_probe && f.packet_id == 0) ||
                                 (state.current && f.packet_id == state.current->id));
                if (matches) {
                    mac::Event ev{mac::EventKind::ack};
                    ev.esnr_db = f.esnr_feedback_db;
                    deliver(ev);
                }
                break;
            }
            case medium::FrameKind::nack1: {
                const bool matches =
                    awaiting && ((state.current_is_probe && f.packet_id == 0) ||
                                 (state.current && f.packet_id == state.current->id));
                if (matches) deliver({mac::EventKind::nack1});
                break;
            }
            case medium::FrameKind::nack2:
                // Broadcast; only a sender waiting on its own frame reacts.
                if (awaiting) deliver({mac::EventKind::nack2});
                break;
            default:
                break;
        }
    }
};

NetworkSim::NetworkSim(ScenarioConfig cfg, bool record_trace)
    : cfg_(std::move(cfg)),
      record_trace_(record_trace),
      traffic_rng_(cfg_.seed, kTrafficStream) {
    validate(cfg_);
    const auto n = static_cast<std::uint64_t>(cfg_.node_count);

    sim::RngStream placement(cfg_.seed, n + kPlacementOffset);
    topo_ = medium::make_star_topology(cfg_.node_count, cfg_.region_m,
                                       cfg_.sound_speed_mps, cfg_.delay_scale, placement);

    mac::Params params = cfg_.mac;
    params.max_delay_s = topo_.max_sender_delay();
    if (cfg_.auto_slot) params.slot_s = std::max(params.max_delay_s, 1e-3);
    if (cfg_.auto_pause) {
        params.pause_s = cfg_.pause_factor * data_duration(1);
    }

    medium::ChannelModel chan;
    chan.global.points = cfg_.channel.esnr_trace;
    for (const auto& [node, trace] : cfg_.channel.esnr_trace_per_node) {
        chan.per_link[node].points = trace;
    }
    chan.esnr_jitter_std_db = cfg_.channel.esnr_jitter_std_db;
    chan.forced_per = cfg_.channel.forced_per;
    chan.detection_prob = cfg_.channel.detection_prob;
    chan.preamble_duration_s = cfg_.timing.preamble_duration_s;
    chan.per = cfg_.per_model;
    chan.thresholds = cfg_.thresholds;
    chan.esnr_cap_db = cfg_.esnr_cap_db;
    chan.capture = cfg_.mac.capture;

    medium::Callbacks cb;
    cb.on_overhear = [this](int node, const medium::HeaderInfo& h) {
        if (node < 1) return;  // the sink does not contend
        mac::Event ev{mac::EventKind::channel_busy};
        ev.busy_duration_s = h.busy_duration_s;
        nodes_[static_cast<std::size_t>(node - 1)]->deliver(ev);
    };
    cb.on_data_outcome = [this](int node, const medium::AirFrame& f,
                                const mac::ReceptionOutcome& oc) {
        on_data_outcome(node, f, oc);
    };
    cb.on_control = [this](int node, const medium::AirFrame& f) {
        if (node == 0) {
            if (f.kind == medium::FrameKind::control) {
                // Mode probe: measure the link and feed the ESNR back.
                mac::Response r{mac::Response::Kind::ack, f.sender,
                                medium_->reported_esnr(f.sender, sched_.now())};
                send_response(r, f);
            }
            return;
        }
        nodes_[static_cast<std::size_t>(node - 1)]->on_control(f);
    };
    cb.on_assert_violation = [this] { metrics_.assert_violations++; };

    medium_ = std::make_unique<medium::Medium>(
        sched_, topo_, std::move(chan), std::move(cb),
        sim::RngStream(cfg_.seed, n + kChannelOffset));

    mac::Context ctx;
    ctx.thresholds = cfg_.thresholds;
    ctx.data_duration = [this](int mode, int payload_bytes) {
        return phy::packet_duration(cfg_.modes[static_cast<std::size_t>(mode - 1)],
                                    payload_bytes, cfg_.timing);
    };

    const bool adaptive = cfg_.mode_policy.type == ModePolicy::Type::adaptive;
    params.adaptive = adaptive;
    for (int i = 1; i <= cfg_.node_count; ++i) {
        auto d = std::make_unique<NodeDriver>();
        d->sim = this;
        d->id = i;
        d->rng = sim::RngStream(cfg_.seed, static_cast<std::uint64_t>(i));
        d->params = params;
        d->ctx = ctx;

        d->state.cw = params.cw_min;
        d->state.current_mode = adaptive ? 1 : cfg_.mode_policy.fixed_mode;
        d->state.measured_delay_s = topo_.delay(i, 0);
        nodes_.push_back(std::move(d));
    }

    metrics_.warmup_target = static_cast<std::uint64_t>(cfg_.warmup_deliveries);
    metrics_.generated_per_node.assign(static_cast<std::size_t>(cfg_.node_count) + 1, 0);
    metrics_.delivered_per_node.assign(static_cast<std::size_t>(cfg_.node_count) + 1, 0);
    metrics_.dropped_per_node.assign(static_cast<std::size_t>(cfg_.node_count) + 1, 0);
}

NetworkSim::~NetworkSim() = default;

double NetworkSim::data_duration(int mode) const {
    return phy::packet_duration(cfg_.modes[static_cast<std::size_t>(mode - 1)],
                                cfg_.payload_bytes, cfg_.timing);
}

void NetworkSim::generate_next_arrival() {
    next_arrival_s += traffic_rng_.exponential(cfg_.offered_load_pps);
    if (next_arrival_s > cfg_.sim_duration_s) return;
    sched_.schedule(next_arrival_s, [this] {
        const int node =
            1 + static_cast<int>(traffic_rng_.uniform_int(
                    static_cast<std::uint64_t>(cfg_.node_count - 1)));
        mac::PacketDesc pkt{next_packet_id_++, cfg_.payload_bytes, sched_.now()};
        metrics_.generated++;
        metrics_.generated_per_node[static_cast<std::size_t>(node)]++;
        mac::Event ev{mac::EventKind::packet_ready};
        ev.packet = pkt;
        nodes_[static_cast<std::size_t>(node - 1)]->deliver(ev);
        generate_next_arrival();
    });
}

void NetworkSim::on_data_outcome(int node, const medium::AirFrame& frame,
                                 const mac::ReceptionOutcome& oc) {
    using Kind = mac::ReceptionOutcome::Kind;
    mac::Response response{mac::Response::Kind::none, -1, 0.0};
    if (node == 0) {
        response = mac::receiver_step(oc, frame.sender, cfg_.mac.capture);
    }

    switch (oc.kind) {
        case Kind::decoded:
            break;
        case Kind::preamble_only:
            metrics_.channel_losses++;
            break;
        case Kind::collision_detected:
            if (oc.primary && response.kind == mac::Response::Kind::nack2) {
                metrics_.collisions++;
            }
            if (response.kind != mac::Response::Kind::ack) metrics_.collided_frames++;
            break;
        case Kind::missed:
            metrics_.missed_frames++;
            break;
    }

    if (response.kind == mac::Response::Kind::ack) {
        // Payload arrived; count each packet once even if a stale-ACK race
        // makes the sender retransmit it.
        if (delivered_ids_.insert(frame.packet_id).second) {
            metrics_.delivered++;
            metrics_.delivered_per_node[static_cast<std::size_t>(frame.sender)]++;
            metrics_.delivered_per_mode[static_cast<std::size_t>(frame.mode)]++;
            const auto bits = static_cast<std::uint64_t>(frame.payload_bytes) * 8u;
            metrics_.delivered_payload_bits += bits;
            if (metrics_.warmup_end_time_s >= 0.0) {
                metrics_.delivered_bits_after_warmup += bits;
            } else if (metrics_.delivered >= metrics_.warmup_target) {
                metrics_.warmup_end_time_s = sched_.now();
            }
        }
    }

    if (node == 0 && response.kind != mac::Response::Kind::none) {
        send_response(response, frame);
    }
}

void NetworkSim::send_response(const mac::Response& r, const medium::AirFrame& cause) {
    medium::AirFrame f;
    switch (r.kind) {
        case mac::Response::Kind::ack: f.kind = medium::FrameKind::ack; break;
        case mac::Response::Kind::nack1: f.kind = medium::FrameKind::nack1; break;
        case mac::Response::Kind::nack2: f.kind = medium::FrameKind::nack2; break;
        case mac::Response::Kind::none: return;
    }
    f.sender = 0;
    f.addressee = r.addressee;
    f.mode = cause.mode;
    f.duration_s = r.kind == mac::Response::Kind::ack ? cfg_.mac.ack_duration_s
                                                      : cfg_.mac.nack_duration_s;
    f.esnr_feedback_db = r.esnr_db;
    f.packet_id = r.kind == mac::Response::Kind::nack2 ? 0 : cause.packet_id;
    f.header = {0, r.addressee, cause.mode, 0, 0.0};

    // One transducer: responses queue behind whatever the sink is sending.
    const double start =
        std::max(sched_.now() + cfg_.mac.t_other_s, sink_tx_until_);
    sink_tx_until_ = start + f.duration_s;
    f.tx_start_s = start;
    sched_.schedule(start, [this, f] { medium_->propagate(f); });
}

const RunMetrics& NetworkSim::run() {
    if (ran_) return metrics_;
    ran_ = true;
    generate_next_arrival();
    sched_.run_until(cfg_.sim_duration_s);
    metrics_.sim_time_s = cfg_.sim_duration_s;
    for (const auto& d : nodes_) {
        for (const auto& pkt : d->state.queue) {
            if (delivered_ids_.count(pkt.id) == 0) metrics_.in_flight_end++;
        }
        if (d->state.current && !d->state.current_is_probe &&
            delivered_ids_.count(d->state.current->id) == 0) {
            metrics_.in_flight_end++;
        }
    }
    return metrics_;
}

RunMetrics run_scenario(const ScenarioConfig& cfg) {
    NetworkSim sim(cfg);
    return sim.run();
}

std::vector<RunMetrics> run_replications_serial(const ScenarioConfig& cfg, int reps) {
    std::vector<RunMetrics> out(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) {
        ScenarioConfig c = cfg;
        c.seed = cfg.seed + static_cast<std::uint64_t>(r);
        out[static_cast<std::size_t>(r)] = run_scenario(c);
    }
    return out;
}

std::vector<RunMetrics> run_replications(const ScenarioConfig& cfg, int reps) {
    std::vector<RunMetrics> out(static_cast<std::size_t>(reps));
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < reps; ++r) {
        ScenarioConfig c = cfg;
        c.seed = cfg.seed + static_cast<std::uint64_t>(r);
        out[static_cast<std::size_t>(r)] = run_scenario(c);
    }
    return out;
}

}  // namespace uwmac
