#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "uwmac/network_sim.hpp"
#include "uwmac/scenario.hpp"

namespace uwmac::exp {

struct Stat {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
};

Stat stat_of(const std::vector<double>& xs);

// One result table: a header block carrying the effective config (so any CSV
// is reproducible from its own header), column names and numeric rows.
struct Table {
    std::string family;
    std::string effective_config;  // single-line JSON
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::uint64_t assert_violations = 0;
};

// Full-precision CSV ("#"-prefixed header block, then column header and rows).
void write_csv(const Table& table, std::ostream& out);
std::string to_csv(const Table& table);

enum class Family { load_sweep, pt_sweep, per_sweep, mode_compare, adaptive_vs_fixed };

Family family_from_name(const std::string& name);
const char* family_name(Family f);

struct RunOptions {
    int replications = 10;
    bool parallel = true;
};

// Normalized throughput vs offered load for several node counts.
Table load_sweep(const ScenarioConfig& cfg, const RunOptions& opts);
// Saturated throughput vs PT-ratio (delay scale sweep).
Table pt_sweep(const ScenarioConfig& cfg, const RunOptions& opts);
// Saturated throughput vs forced packet error rate.
Table per_sweep(const ScenarioConfig& cfg, const RunOptions& opts);
// Saturated normalized throughput per fixed mode, each normalized by its
// own packet duration.
Table mode_compare(const ScenarioConfig& cfg, const RunOptions& opts);
// Adaptive vs fixed-mode goodput over an ESNR grid.
Table adaptive_vs_fixed(const ScenarioConfig& cfg, const RunOptions& opts);

Table run_experiment(Family family, const ScenarioConfig& cfg, const RunOptions& opts);

// Effective-config echo used in CSV headers; defined in config.cpp.
std::string config_to_json(const ScenarioConfig& cfg);

}  // namespace uwmac::exp
