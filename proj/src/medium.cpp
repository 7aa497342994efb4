#include "uwmac/medium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uwmac::medium {

const char* to_string(FrameKind k) {
    switch (k) {
        case FrameKind::data: return "DATA";
        case FrameKind::ack: return "ACK";
        case FrameKind::nack1: return "NACK1";
        case FrameKind::nack2: return "NACK2";
        case FrameKind::control: return "CONTROL";
    }
    return "?";
}

double EsnrProcess::at(double t) const {
    if (points.empty()) {
        throw sim::SimError("EsnrProcess: no breakpoints configured for queried link");
    }
    double value = points.front().second;
    for (const auto& [time, esnr] : points) {
        if (time <= t) value = esnr;
        else break;
    }
    return value;
}

double Topology::delay(int a, int b) const {
    return delay_scale *
           acoustics::propagation_delay(positions[static_cast<std::size_t>(a)],
                                        positions[static_cast<std::size_t>(b)],
                                        sound_speed_mps);
}

double Topology::max_sender_delay() const {
    double m = 0.0;
    for (int i = 1; i < node_count(); ++i) m = std::max(m, delay(i, 0));
    return m;
}

double Topology::avg_sender_delay() const {
    if (node_count() <= 1) return 0.0;
    double s = 0.0;
    for (int i = 1; i < node_count(); ++i) s += delay(i, 0);
    return s / (node_count() - 1);
}

Topology make_star_topology(int sender_count, double region_m, double sound_speed_mps,
                            double delay_scale, sim::RngStream& placement) {
    Topology topo;
    topo.sound_speed_mps = sound_speed_mps;
    topo.delay_scale = delay_scale;
    topo.positions.push_back({region_m / 2.0, region_m / 2.0});  // sink
    for (int i = 0; i < sender_count; ++i) {
        topo.positions.push_back(
            {placement.uniform(0.0, region_m), placement.uniform(0.0, region_m)});
    }
    return topo;
}

OverlapClass classify_offset(double offset_s, double first_duration_s,
                             double preamble_duration_s) {
    if (offset_s < preamble_duration_s) return OverlapClass::near_synchronous;
    if (offset_s < first_duration_s) return OverlapClass::collision;
    return OverlapClass::sequential;
}

Medium::Medium(sim::Scheduler& sched, const Topology& topo, ChannelModel channel,
               Callbacks callbacks, sim::RngStream channel_rng)
    : sched_(sched),
      topo_(topo),
      channel_(std::move(channel)),
      cb_(std::move(callbacks)),
      rng_(channel_rng),
      nodes_(static_cast<std::size_t>(topo.node_count())) {}

double Medium::esnr_sample(int sender, double t) const {
    auto it = channel_.per_link.find(sender);
    if (it != channel_.per_link.end()) return it->second.at(t);
    return channel_.global.at(t);
}

double Medium::reported_esnr(int sender, double t) {
    double esnr = esnr_sample(sender, t);
    if (channel_.esnr_jitter_std_db > 0.0) {
        esnr += rng_.normal(0.0, channel_.esnr_jitter_std_db);
    }
    return std::min(esnr, channel_.esnr_cap_db);
}

bool Medium::sender_busy(int node, double t) const {
    const auto& n = nodes_[static_cast<std::size_t>(node)];
    return t >= n.tx_begin && t < n.tx_until;
}

double Medium::sender_busy_until(int node) const {
    return nodes_[static_cast<std::size_t>(node)].tx_until;
}

void Medium::propagate(AirFrame frame) {
    frame.frame_seq = next_frame_seq_++;
    auto& sender = nodes_[static_cast<std::size_t>(frame.sender)];
    sender.tx_begin = frame.tx_start_s;
    sender.tx_until = frame.tx_start_s + frame.duration_s;
    // Going half-duplex mid-reception corrupts whatever was still arriving.
    for (auto& g : sender.groups) {
        for (auto& m : g.members) {
            if (!m.done && m.arr_end > frame.tx_start_s) m.corrupted = true;
        }
    }
    for (int j = 0; j < topo_.node_count(); ++j) {
        if (j == frame.sender) continue;  // half-duplex: deaf to itself
        const double d = topo_.delay(frame.sender, j);
        const double start = frame.tx_start_s + d;
        const double end = start + frame.duration_s;
        sched_.schedule(start, [this, j, frame, end] { arrival_start(j, frame, end); });
        sched_.schedule(end, [this, j, frame] { arrival_end(j, frame); });
    }
}

void Medium::arrival_start(int node, const AirFrame& frame, double arr_end) {
    auto& n = nodes_[static_cast<std::size_t>(node)];
    const double now = sched_.now();

    if (sender_busy(node, now)) {
        n.deaf_frames.insert(frame.frame_seq);
        if (frame.kind == FrameKind::data) {
            n.deaf_until = std::max(n.deaf_until, arr_end);
        }
        return;
    }

    if (frame.kind != FrameKind::data) {
        // Control frames stay out of overlap bookkeeping. The protected
        // schedule assumption is checked for responses: two ACK/NACK frames
        // this node must actually receive may never overlap here. Probes
        // contend like ordinary traffic, so their overlaps are not flagged.
        if (frame.kind != FrameKind::control &&
            (frame.addressee == node || frame.addressee == -1)) {
            if (now < n.ctrl_rx_until && cb_.on_assert_violation) cb_.on_assert_violation();
            n.ctrl_rx_until = std::max(n.ctrl_rx_until, arr_end);
        }
        return;
    }

    PendingFrame pf;
    pf.frame = frame;
    pf.arr_start = now;
    pf.arr_end = arr_end;
    pf.detected = rng_.bernoulli(channel_.detection_prob);
    // A frame the receiver never synced onto may still be on the water; it
    // jams this payload even though the preamble correlator sees through it.
    pf.interfered = now < n.deaf_until;

    RxGroup* open = n.groups.empty() || now >= n.groups.back().group_end
                        ? nullptr
                        : &n.groups.back();
    if (open == nullptr) {
        RxGroup g;
        g.group_end = arr_end;
        g.members.push_back(pf);
        n.groups.push_back(std::move(g));
        // Virtual carrier sensing: a third party that detects the preamble
        // decodes the header and learns the busy duration.
        if (pf.detected && node != frame.addressee && frame.header.busy_duration_s > 0.0 &&
            cb_.on_overhear) {
            cb_.on_overhear(node, frame.header);
        }
        return;
    }

    // Joining an ongoing reception: everything in the group is lost. The
    // first two arrivals decide whether the loss is a detectable collision
    // (two clean preambles inside one packet duration) or a merged pile-up
    // the receiver never syncs onto.
    RxGroup& g = *open;
    const double offset = now - g.members.front().arr_start;
    const OverlapClass cls = classify_offset(offset, g.members.front().frame.duration_s,
                                             channel_.preamble_duration_s);
    if (!g.collided && !g.merged) {
        if (cls == OverlapClass::collision && g.members.front().detected && pf.detected) {
            g.collided = true;
        } else {
            g.merged = true;
        }
    }
    g.group_end = std::max(g.group_end, arr_end);
    g.members.push_back(pf);
}

void Medium::arrival_end(int node, const AirFrame& frame) {
    auto& n = nodes_[static_cast<std::size_t>(node)];

    if (n.deaf_frames.erase(frame.frame_seq) > 0) {
        if (frame.kind == FrameKind::data && node == frame.addressee &&
            cb_.on_data_outcome) {
            mac::ReceptionOutcome oc;
            oc.kind = mac::ReceptionOutcome::Kind::missed;
            cb_.on_data_outcome(node, frame, oc);
        }
        return;
    }

    if (frame.kind != FrameKind::data) {
        if ((frame.addressee == -1 || frame.addressee == node) && cb_.on_control) {
            cb_.on_control(node, frame);
        }
        return;
    }

    for (auto git = n.groups.begin(); git != n.groups.end(); ++git) {
        auto mit = std::find_if(git->members.begin(), git->members.end(),
                                [&](const PendingFrame& m) {
                                    return m.frame.frame_seq == frame.frame_seq;
                                });
        if (mit == git->members.end()) continue;
        mit->done = true;
        if (node == frame.addressee) resolve_data_end(node, *mit, *git);
        const bool all_done = std::all_of(git->members.begin(), git->members.end(),
                                          [](const PendingFrame& m) { return m.done; });
        if (all_done) n.groups.erase(git);
        return;
    }
}

void Medium::resolve_data_end(int node, PendingFrame& member, RxGroup& group) {
    mac::ReceptionOutcome oc;
    const AirFrame& frame = member.frame;
    const double now = sched_.now();

    const auto decode_ok = [&](int mode, double esnr) {
        const double per = channel_.forced_per
                               ? *channel_.forced_per
                               : phy::per_model(mode, esnr, channel_.per,
                                                channel_.thresholds);
        return rng_.bernoulli(1.0 - per);
    };

    if (member.corrupted) {
        oc.kind = mac::ReceptionOutcome::Kind::missed;
        oc.primary = (frame.frame_seq == group.members.front().frame.frame_seq);
    } else if (group.merged) {
        oc.kind = mac::ReceptionOutcome::Kind::missed;
        oc.primary = (frame.frame_seq == group.members.front().frame.frame_seq);
    } else if (group.collided) {
        oc.kind = mac::ReceptionOutcome::Kind::collision_detected;
        oc.primary = (frame.frame_seq == group.members.front().frame.frame_seq);
        if (oc.primary && channel_.capture) {
            // The first packet of an overlap may still decode; whether that
            // yields a unicast ACK is the receiver's call.
            const double esnr = esnr_sample(frame.sender, now);
            oc.first_decoded = decode_ok(frame.mode, esnr);
            if (oc.first_decoded) oc.esnr_db = reported_esnr(frame.sender, now);
        }
    } else if (!member.detected) {
        oc.kind = mac::ReceptionOutcome::Kind::missed;
    } else if (member.interfered) {
        // Payload jammed by a frame the receiver never detected; with one
        // preamble seen this is indistinguishable from a channel loss.
        oc.kind = mac::ReceptionOutcome::Kind::preamble_only;
    } else if (decode_ok(frame.mode, esnr_sample(frame.sender, now))) {
        oc.kind = mac::ReceptionOutcome::Kind::decoded;
        oc.esnr_db = reported_esnr(frame.sender, now);
    } else {
        oc.kind = mac::ReceptionOutcome::Kind::preamble_only;
    }

    if (cb_.on_data_outcome) cb_.on_data_outcome(node, frame, oc);
}

}  // namespace uwmac::medium
