#include "uwmac/sim_core.hpp"

#include <cmath>
#include <limits>

namespace uwmac::sim {

EventHandle Scheduler::schedule(double time, EventFn fn) {
    if (!(time >= now_)) {
        throw SimError("time-order violation: schedule at t=" + std::to_string(time) +
                       " before clock t=" + std::to_string(now_));
    }
    const std::uint64_t seq = next_seq_++;
    order_.push(Key{time, seq});
    pending_.emplace(seq, std::move(fn));
    return EventHandle{seq};
}

void Scheduler::cancel(EventHandle h) {
    pending_.erase(h.id);  // heap key stays behind and is skipped on pop
}

bool Scheduler::is_pending(EventHandle h) const {
    return pending_.count(h.id) > 0;
}

bool Scheduler::dispatch_top() {
    while (!order_.empty()) {
        const Key top = order_.top();
        auto it = pending_.find(top.seq);
        if (it == pending_.end()) {
            order_.pop();  // cancelled
            continue;
        }
        EventFn fn = std::move(it->second);
        pending_.erase(it);
        order_.pop();
        now_ = top.time;
        ++dispatched_;
        fn();
        return true;
    }
    return false;
}

bool Scheduler::step() {
    return dispatch_top();
}

double Scheduler::run_until(double t_end) {
    if (!(t_end >= now_)) {
        throw SimError("run_until into the past: t_end=" + std::to_string(t_end) +
                       " < clock t=" + std::to_string(now_));
    }
    for (;;) {
        // Peel cancelled keys to find the next live event time.
        while (!order_.empty() && pending_.find(order_.top().seq) == pending_.end()) {
            order_.pop();
        }
        if (order_.empty() || order_.top().time > t_end) break;
        dispatch_top();
    }
    now_ = t_end;
    return now_;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : eng_(mix64(seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1))) {}

std::uint64_t RngStream::next_u64() {
    return eng_();
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

std::uint64_t RngStream::uniform_int(std::uint64_t hi) {
    if (hi == std::numeric_limits<std::uint64_t>::max()) return next_u64();
    const std::uint64_t n = hi + 1;
    std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % n) + 1;
    if (rem == n) rem = 0;  // 2^64 % n
    std::uint64_t x = next_u64();
    if (rem != 0) {
        const std::uint64_t bound = std::numeric_limits<std::uint64_t>::max() - rem + 1;
        while (x >= bound) x = next_u64();
    }
    return x % n;
}

double RngStream::exponential(double rate) {
    return -std::log1p(-uniform01()) / rate;
}

double RngStream::normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

bool RngStream::bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
}

}  // namespace uwmac::sim
