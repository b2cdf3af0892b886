#pragma once

#include "chipsim/model.hpp"

namespace chipsim {

// Latency of one (scenario, workload, batch) evaluation, in milliseconds.
// Invariant: total == on_die * throttle_factor + comm_exposed.
struct LatencyBreakdown {
    int batch = 1;
    double compute_busy = 0.0;  // compute share of on_die (no dispatch overhead)
    double on_die = 0.0;        // compute + dispatch, after efficiency factor, before throttle
    double comm_total = 0.0;    // full link time, used for energy
    double comm_exposed = 0.0;  // link time left on the critical path after overlap
    double throttle_factor = 1.0;
    double total = 0.0;
};

// Transfer time in ms for `size_mb` megabytes; 1 Gbps moves 1 Mbit per ms.
double transfer_time_ms(double size_mb, Bandwidth bandwidth, double protocol_overhead,
                        double compression_ratio);

double hop_latency_ms(const ScenarioParams& scenario, int hops);

// Compute time for a whole batch before the scenario efficiency factor.
double batch_compute_ms(const WorkloadModel& workload, int batch,
                        BatchModel model = BatchModel::asymptotic);

double on_die_time_ms(const ScenarioParams& scenario, const WorkloadModel& workload,
                      const ModelConstants& constants, int batch);

// `on_die_scale` multiplies the on-die time; the harness uses it to inject
// sample noise. It is 1 for the deterministic model.
LatencyBreakdown latency_point(const ScenarioParams& scenario, const WorkloadModel& workload,
                               const ModelConstants& constants, int batch,
                               double throttle_factor = 1.0, double on_die_scale = 1.0);

// Images per second. Throws std::invalid_argument when latency_ms <= 0.
double throughput(int batch, double latency_ms);

}  // namespace chipsim
