#include "chipsim/power_thermal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chipsim {

double utilization(const LatencyBreakdown& breakdown) {
    if (breakdown.total <= 0.0) return 0.0;
    return std::clamp(breakdown.compute_busy / breakdown.total, 0.0, 1.0);
}

double power_draw_mw(const ScenarioParams& scenario, const LatencyBreakdown& breakdown,
                     double u, const DvfsPolicy& policy) {
    double p_static = scenario.base_power_mw * scenario.static_power_ratio;
    const double p_dynamic = scenario.base_power_mw * (1.0 - scenario.static_power_ratio) * u;
    if (policy.mode == DvfsMode::adaptive && u < policy.util_cutoff) {
        // Idle fraction runs at the reduced island voltage.
        const double idle_v2 = policy.idle_voltage * policy.idle_voltage;
        p_static *= u + (1.0 - u) * idle_v2;
    }
    const double v2 = scenario.voltage_scale * scenario.voltage_scale;
    double p = (p_static + p_dynamic) * v2;
    if (breakdown.total > 0.0) p += scenario.comm_power_rate * breakdown.comm_total / breakdown.total;
    return p;
}

double tops_per_watt(double throughput, double power_mw, double ops_per_image_giga) {
    return (throughput * ops_per_image_giga * 1e-3) / (power_mw / 1000.0);
}

double energy_per_inference_mj(double power_mw, double throughput) { return power_mw / throughput; }

double steady_theta(double u, double complexity_factor) {
    return std::clamp(u * complexity_factor, 0.0, ThermalState::kMaxTheta);
}

ThermalState thermal_step(ThermalState state, double u, double complexity_factor, double dt_ms,
                          double time_constant_ms) {
    const double target = u * complexity_factor;
    const double next = state.theta + (dt_ms / time_constant_ms) * (target - state.theta);
    return {std::clamp(next, 0.0, ThermalState::kMaxTheta)};
}

double throttle_factor(double theta, double threshold, double gain) {
    return 1.0 + gain * std::max(0.0, theta - threshold);
}

SteadyPoint steady_point(const ScenarioParams& scenario, const WorkloadModel& workload,
                         const ModelConstants& constants, int batch, const DvfsPolicy& policy,
                         double on_die_scale) {
    double factor = 1.0;
    double prev_factor = factor;
    double prev_theta = std::nan("");
    double reported_prev = prev_theta;
    double theta = 0.0;
    int iter = 0;
    bool converged = false;
    while (iter < constants.fixed_point_max_iter) {
        ++iter;
        const auto bd = latency_point(scenario, workload, constants, batch, factor, on_die_scale);
        theta = steady_theta(utilization(bd), workload.complexity_factor);
        reported_prev = prev_theta;
        prev_factor = factor;
        factor = throttle_factor(theta, scenario.throttle_threshold, constants.throttle_gain);
        if (std::abs(theta - prev_theta) < constants.fixed_point_tol) {
            converged = true;
            break;
        }
        // A throttle-free first pass is already self-consistent.
        if (iter == 1 && factor == prev_factor) {
            converged = true;
            break;
        }
        prev_theta = theta;
    }
    if (!converged) {
        std::ostringstream os;
        os << "throttle fixed point did not converge for " << scenario.name << "/" << workload.name
           << " batch " << batch << " after " << iter << " iterations (theta " << reported_prev
           << " -> " << theta << ", factor " << prev_factor << " -> " << factor << ")";
        throw ConvergenceError(os.str(), reported_prev, theta, prev_factor, factor, iter);
    }

    SteadyPoint sp;
    sp.breakdown = latency_point(scenario, workload, constants, batch, factor, on_die_scale);
    sp.utilization = utilization(sp.breakdown);
    sp.theta = steady_theta(sp.utilization, workload.complexity_factor);
    sp.power_mw = power_draw_mw(scenario, sp.breakdown, sp.utilization, policy);
    sp.iterations = iter;
    return sp;
}

NpuSplit rebalance(const NpuSplit& split, double smoothing) {
    NpuSplit out = split;
    const double t0 = split.npu0.theta;
    const double t1 = split.npu1.theta;
    out.phi = std::clamp((t1 + smoothing) / (t0 + t1 + 2.0 * smoothing), 0.0, 1.0);
    return out;
}

MigrationResult simulate_migration(NpuSplit split, double u, double complexity_factor,
                                   double dt_ms, double time_constant_ms, double smoothing,
                                   double tolerance, int max_steps) {
    MigrationResult r;
    for (r.steps = 0; r.steps < max_steps; ++r.steps) {
        split.npu0 = thermal_step(split.npu0, 2.0 * split.phi * u, complexity_factor, dt_ms,
                                  time_constant_ms);
        split.npu1 = thermal_step(split.npu1, 2.0 * (1.0 - split.phi) * u, complexity_factor,
                                  dt_ms, time_constant_ms);
        split = rebalance(split, smoothing);
        r.imbalance = std::abs(split.npu0.theta - split.npu1.theta);
        if (r.imbalance <= tolerance) {
            ++r.steps;
            break;
        }
    }
    r.split = split;
    return r;
}

}  // namespace chipsim
