#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "uwmac/sim_core.hpp"

using namespace uwmac;

TEST_CASE("schedule at current clock is accepted and dispatched first") {
    sim::Scheduler s;
    std::vector<int> order;
    s.schedule(0.0, [&] { order.push_back(1); });
    s.schedule(1.0, [&] { order.push_back(2); });
    s.run_until(2.0);
    CHECK(order == std::vector<int>{1, 2});
    CHECK(s.now() == 2.0);
}

TEST_CASE("equal-time events dispatch in insertion order") {
    sim::Scheduler s;
    std::vector<int> order;
    for (int i = 0; i < 10; ++i) {
        s.schedule(5.0, [&order, i] { order.push_back(i); });
    }
    s.run_until(5.0);
    std::vector<int> expect(10);
    for (int i = 0; i < 10; ++i) expect[static_cast<std::size_t>(i)] = i;
    CHECK(order == expect);
}

TEST_CASE("scheduling in the past is a time-order violation") {
    sim::Scheduler s;
    s.schedule(3.0, [] {});
    s.run_until(3.0);
    CHECK_THROWS_AS(s.schedule(2.0, [] {}), sim::SimError);
    CHECK_THROWS_AS(s.run_until(1.0), sim::SimError);
}

TEST_CASE("run_until dispatches only events at or before the horizon") {
    sim::Scheduler s;
    int count = 0;
    s.schedule(1.0, [&] { ++count; });
    s.schedule(2.0, [&] { ++count; });
    s.schedule(3.0, [&] { ++count; });
    s.run_until(2.5);
    CHECK(count == 2);
    CHECK(s.now() == 2.5);
    CHECK(s.dispatched() == 2);
}

TEST_CASE("empty queue run advances the clock with zero dispatches") {
    sim::Scheduler s;
    s.run_until(10.0);
    CHECK(s.now() == 10.0);
    CHECK(s.dispatched() == 0);
}

TEST_CASE("cancelled handles never dispatch and cancel is idempotent") {
    sim::Scheduler s;
    int fired = 0;
    auto h = s.schedule(1.0, [&] { ++fired; });
    s.schedule(2.0, [&] { ++fired; });
    s.cancel(h);
    s.cancel(h);
    s.run_until(5.0);
    CHECK(fired == 1);
    CHECK_FALSE(s.is_pending(h));
}

TEST_CASE("events scheduled during dispatch run in the same horizon") {
    sim::Scheduler s;
    std::vector<double> times;
    s.schedule(1.0, [&] {
        times.push_back(s.now());
        s.schedule(1.0, [&] { times.push_back(s.now()); });
        s.schedule(1.5, [&] { times.push_back(s.now()); });
    });
    s.run_until(2.0);
    CHECK(times == std::vector<double>{1.0, 1.0, 1.5});
}

TEST_CASE("clock never decreases over a randomized schedule") {
    sim::Scheduler s;
    sim::RngStream rng(7, 0);
    double last = -1.0;
    bool ok = true;
    std::function<void(int)> spawn = [&](int depth) {
        if (s.now() < last) ok = false;
        last = s.now();
        if (depth > 0) {
            const double dt = rng.uniform(0.0, 2.0);
            s.schedule(s.now() + dt, [&, depth] { spawn(depth - 1); });
        }
    };
    for (int i = 0; i < 20; ++i) {
        s.schedule(rng.uniform(0.0, 5.0), [&] { spawn(5); });
    }
    s.run_until(100.0);
    CHECK(ok);
    CHECK(s.empty());
}

TEST_CASE("identical (seed, stream) pairs reproduce; different streams diverge") {
    sim::RngStream a(42, 3);
    sim::RngStream b(42, 3);
    sim::RngStream c(42, 4);
    bool same = true, diff = false;
    for (int i = 0; i < 1000; ++i) {
        const auto va = a.next_u64();
        if (va != b.next_u64()) same = false;
        if (va != c.next_u64()) diff = true;
    }
    CHECK(same);
    CHECK(diff);
}

TEST_CASE("uniform_int covers the inclusive range without bias artifacts") {
    sim::RngStream rng(1, 0);
    std::vector<int> counts(5, 0);
    for (int i = 0; i < 50000; ++i) {
        const auto v = rng.uniform_int(4);
        REQUIRE(v <= 4);
        counts[static_cast<std::size_t>(v)]++;
    }
    for (int c : counts) {
        CHECK(c > 9000);  // expectation 10000, generous band
        CHECK(c < 11000);
    }
}

TEST_CASE("exponential and normal draws have the configured moments") {
    sim::RngStream rng(9, 1);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += rng.exponential(2.0);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));

    double mean = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal(3.0, 2.0);
        mean += x;
        sq += x * x;
    }
    mean /= n;
    const double var = sq / n - mean * mean;
    CHECK(mean == doctest::Approx(3.0).epsilon(0.01));
    CHECK(var == doctest::Approx(4.0).epsilon(0.03));
}
