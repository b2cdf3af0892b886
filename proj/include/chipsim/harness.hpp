#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "chipsim/model.hpp"

namespace chipsim {

struct RunStats {
    std::string scenario;
    std::string workload;
    int batch = 1;
    double latency_mean = 0.0;  // ms per batch
    double latency_std = 0.0;
    double throughput = 0.0;    // images/s from latency_mean
    double power_mean = 0.0;    // mW
    double tops_per_watt = 0.0;
    double energy_mj = 0.0;     // per image
    bool realtime_ok = false;
    int samples = 0;            // samples that converged
    int nonconverged = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const RunStats&, const RunStats&) = default;
};

struct ImprovementReport {
    std::string baseline;
    std::string candidate;
    std::string workload;
    int batch = 1;
    // Positive means the candidate is better.
    double latency_reduction_pct = 0.0;
    double throughput_gain_pct = 0.0;
    double power_reduction_pct = 0.0;
    double efficiency_gain_pct = 0.0;
};

struct RealtimeEntry {
    std::string workload;
    double latency_ms = 0.0;
    double budget_ms = 0.0;
    bool pass = false;
};

// Raised when one or more grid points produced no converged sample.
class GridError : public std::runtime_error {
public:
    GridError(const std::string& what, std::vector<std::string> failures)
        : std::runtime_error(what), failures(std::move(failures)) {}
    std::vector<std::string> failures;
};

// Seed for the noise stream of one grid point. Depends only on the run seed
// and the point's identity, never on evaluation order.
std::uint64_t point_seed(std::uint64_t seed, const std::string& scenario,
                         const std::string& workload, int batch);

// Throws GridError if no sample converged.
RunStats run_point(const SimConfig& config, const ScenarioParams& scenario,
                   const WorkloadModel& workload, int batch);

// One row per (scenario, workload, batch), ordered by scenario name, workload
// name, then batch. `jobs` == 0 uses the hardware concurrency.
std::vector<RunStats> run_grid(const SimConfig& config, unsigned jobs = 0);

// Throws std::out_of_range when either row is missing.
const RunStats& find_row(const std::vector<RunStats>& stats, const std::string& scenario,
                         const std::string& workload, int batch);

ImprovementReport improvements(const std::vector<RunStats>& stats, const std::string& baseline,
                               const std::string& candidate, const std::string& workload,
                               int batch = 1);

ImprovementReport improvements(const RunStats& baseline, const RunStats& candidate);

// Batch-1 pass/fail per workload on one scenario, in workload-name order.
std::vector<RealtimeEntry> realtime_table(const std::vector<RunStats>& stats,
                                          const std::string& scenario, double budget_ms);

}  // namespace chipsim
