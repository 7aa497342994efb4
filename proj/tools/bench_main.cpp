// Benchmark comparing the serial reference kernels against their
// OpenMP-parallel counterparts: the Monte-Carlo detection curve and the
// replication sweep. Both pairs must agree exactly; the speedup is the win.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "uwmac/chirp.hpp"
#include "uwmac/network_sim.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   %s\n", name,
                serial_s, parallel_s, serial_s / parallel_s,
                identical ? "results identical" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    int trials = 2000;
    int reps = 16;
    if (argc > 1) trials = std::stoi(argv[1]);
    if (argc > 2) reps = std::stoi(argv[2]);

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel kernels run serially\n");
#endif

    bool all_ok = true;

    {
        uwmac::chirp::ChirpSpec spec;
        uwmac::chirp::CurveOptions opts;
        opts.trials = trials;
        const std::vector<double> grid{-18.0, -14.0, -10.0, -6.0, 0.0, 10.0};

        auto t0 = Clock::now();
        const auto serial = uwmac::chirp::detection_curve_serial(spec, grid, opts);
        const double ts = seconds_since(t0);

        t0 = Clock::now();
        const auto parallel = uwmac::chirp::detection_curve(spec, grid, opts);
        const double tp = seconds_since(t0);

        bool same = serial.size() == parallel.size();
        for (std::size_t i = 0; same && i < serial.size(); ++i) {
            same = serial[i].probability == parallel[i].probability;
        }
        all_ok = all_ok && same;
        report("detection_curve", ts, tp, same);
    }

    {
        uwmac::ScenarioConfig cfg;
        cfg.node_count = 5;
        cfg.offered_load_pps = 0.3;
        cfg.sim_duration_s = 1500.0;
        cfg.channel.esnr_trace = {{0.0, 20.0}};
        cfg.channel.forced_per = 0.0;

        auto t0 = Clock::now();
        const auto serial = uwmac::run_replications_serial(cfg, reps);
        const double ts = seconds_since(t0);

        t0 = Clock::now();
        const auto parallel = uwmac::run_replications(cfg, reps);
        const double tp = seconds_since(t0);

        bool same = serial.size() == parallel.size();
        for (std::size_t i = 0; same && i < serial.size(); ++i) {
            same = serial[i].delivered == parallel[i].delivered &&
                   serial[i].generated == parallel[i].generated &&
                   serial[i].collisions == parallel[i].collisions &&
                   serial[i].delivered_payload_bits == parallel[i].delivered_payload_bits;
        }
        all_ok = all_ok && same;
        report("replication_sweep", ts, tp, same);
    }

    return all_ok ? 0 : 1;
}
