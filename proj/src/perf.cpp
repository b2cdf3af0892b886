#include "chipsim/perf.hpp"

#include <stdexcept>

namespace chipsim {

double transfer_time_ms(double size_mb, Bandwidth bandwidth, double protocol_overhead,
                        double compression_ratio) {
    if (bandwidth.is_unbounded()) return 0.0;
    const double megabits = size_mb * compression_ratio * 8.0;
    return megabits / bandwidth.gbps() * protocol_overhead;
}

double hop_latency_ms(const ScenarioParams& scenario, int hops) {
    if (scenario.bandwidth.is_unbounded()) return 0.0;
    return hops * scenario.link_latency_us / 1000.0;
}

double batch_compute_ms(const WorkloadModel& workload, int batch, BatchModel model) {
    const double e = workload.batch_efficiency;
    const double b = static_cast<double>(batch);
    switch (model) {
        case BatchModel::asymptotic:
            return workload.base_compute_ms * (b * e + 1.0 - e);
        case BatchModel::amortizing:
            return workload.base_compute_ms * (b * (1.0 - e) + e);
    }
    return workload.base_compute_ms * b;
}

double on_die_time_ms(const ScenarioParams& scenario, const WorkloadModel& workload,
                      const ModelConstants& constants, int batch) {
    const double compute = batch_compute_ms(workload, batch, constants.batch_model);
    return (compute + constants.sched_overhead_ms) * scenario.efficiency_factor;
}

LatencyBreakdown latency_point(const ScenarioParams& scenario, const WorkloadModel& workload,
                               const ModelConstants& constants, int batch,
                               double throttle_factor, double on_die_scale) {
    LatencyBreakdown bd;
    bd.batch = batch;
    bd.throttle_factor = throttle_factor;
    bd.compute_busy = batch_compute_ms(workload, batch, constants.batch_model) *
                      scenario.efficiency_factor * on_die_scale;
    bd.on_die = on_die_time_ms(scenario, workload, constants, batch) * on_die_scale;
    bd.comm_total = hop_latency_ms(scenario, constants.hops) +
                    transfer_time_ms(batch * workload.input_size_mb, scenario.bandwidth,
                                     scenario.protocol_overhead, scenario.compression_ratio);
    bd.comm_exposed = bd.comm_total * (1.0 - scenario.stream_overlap);
    bd.total = bd.on_die * throttle_factor + bd.comm_exposed;
    return bd;
}

double throughput(int batch, double latency_ms) {
    if (!(latency_ms > 0.0)) throw std::invalid_argument("latency must be > 0");
    return batch * 1000.0 / latency_ms;
}

}  // namespace chipsim
