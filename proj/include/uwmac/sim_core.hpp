#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace uwmac::sim {

class SimError : public std::runtime_error {
public:
    explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

using EventFn = std::function<void()>;

// Opaque handle for a scheduled event; cancellation is idempotent.
struct EventHandle {
    std::uint64_t id = 0;
};

/**
 * Monotone discrete-event queue.
 *
 * Events dispatch in nondecreasing time order; ties dispatch in insertion
 * order (sequence number), so reactions to simultaneous events are
 * reproducible. Scheduling in the past is a time-order violation.
 */
class Scheduler {
public:
    double now() const { return now_; }
    std::uint64_t dispatched() const { return dispatched_; }
    bool empty() const { return pending_.empty(); }
    std::size_t pending() const { return pending_.size(); }

    EventHandle schedule(double time, EventFn fn);
    void cancel(EventHandle h);
    bool is_pending(EventHandle h) const;

    // Dispatches every live event with time <= t_end, then advances the
    // clock to t_end. Returns the final clock.
    double run_until(double t_end);

    // Dispatches the single earliest live event, if any.
    bool step();

private:
    struct Key {
        double time;
        std::uint64_t seq;
    };
    struct KeyGreater {
        bool operator()(const Key& a, const Key& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    bool dispatch_top();

    double now_ = 0.0;
    std::uint64_t next_seq_ = 1;
    std::uint64_t dispatched_ = 0;
    std::priority_queue<Key, std::vector<Key>, KeyGreater> order_;
    std::unordered_map<std::uint64_t, EventFn> pending_;
};

/**
 * Deterministic seeded random stream.
 *
 * Identical (seed, stream_id) pairs yield identical draw sequences on every
 * platform: the engine is the standard-specified mt19937_64 and all
 * distribution code is self-contained, so no library-dependent distribution
 * behaviour leaks into results.
 */
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();
    double uniform01();                           // [0, 1)
    double uniform(double lo, double hi);
    std::uint64_t uniform_int(std::uint64_t hi);  // {0, ..., hi}, unbiased
    double exponential(double rate);
    double normal(double mean, double stddev);
    bool bernoulli(double p);

private:
    std::mt19937_64 eng_;
};

}  // namespace uwmac::sim
