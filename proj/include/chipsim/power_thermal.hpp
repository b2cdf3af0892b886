#pragma once

#include <stdexcept>
#include <string>

#include "chipsim/model.hpp"
#include "chipsim/perf.hpp"

namespace chipsim {

struct DvfsPolicy {
    DvfsMode mode = DvfsMode::fixed;
    double idle_voltage = 0.7;
    double util_cutoff = 0.65;

    static DvfsPolicy from(const ModelConstants& constants) {
        return {constants.dvfs_mode, constants.dvfs_idle_voltage, constants.dvfs_util_cutoff};
    }
};

// Dimensionless thermal proxy on the same scale as the scenario throttle
// thresholds. Clamped to [0, kMaxTheta].
struct ThermalState {
    static constexpr double kMaxTheta = 2.0;
    double theta = 0.0;
};

// Load split across the two accelerator chiplets; phi is NPU-0's share.
struct NpuSplit {
    double phi = 0.5;
    ThermalState npu0;
    ThermalState npu1;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double previous_theta, double last_theta,
                     double previous_factor, double last_factor, int iterations)
        : std::runtime_error(what),
          previous_theta(previous_theta),
          last_theta(last_theta),
          previous_factor(previous_factor),
          last_factor(last_factor),
          iterations(iterations) {}

    double previous_theta;
    double last_theta;
    double previous_factor;
    double last_factor;
    int iterations;
};

// Compute duty cycle: busy compute time over wall time, clamped to [0, 1].
double utilization(const LatencyBreakdown& breakdown);

double power_draw_mw(const ScenarioParams& scenario, const LatencyBreakdown& breakdown,
                     double utilization, const DvfsPolicy& policy);

double tops_per_watt(double throughput, double power_mw, double ops_per_image_giga);

// Energy per inference in mJ.
double energy_per_inference_mj(double power_mw, double throughput);

// One explicit Euler step of first-order relaxation toward u * complexity.
ThermalState thermal_step(ThermalState state, double utilization, double complexity_factor,
                          double dt_ms, double time_constant_ms);

double steady_theta(double utilization, double complexity_factor);

double throttle_factor(double theta, double threshold, double gain);

struct SteadyPoint {
    LatencyBreakdown breakdown;
    double power_mw = 0.0;
    double utilization = 0.0;
    double theta = 0.0;
    int iterations = 0;
};

// Solves latency -> utilization -> theta -> throttle -> latency for a
// self-consistent throttle factor. Throws ConvergenceError if theta has not
// settled within constants.fixed_point_tol after fixed_point_max_iter rounds.
SteadyPoint steady_point(const ScenarioParams& scenario, const WorkloadModel& workload,
                         const ModelConstants& constants, int batch, const DvfsPolicy& policy,
                         double on_die_scale = 1.0);

// Shifts load away from the hotter accelerator. Shares always sum to 1.
NpuSplit rebalance(const NpuSplit& split, double smoothing = 0.1);

struct MigrationResult {
    NpuSplit split;
    int steps = 0;
    double imbalance = 0.0;  // |theta0 - theta1| after the last step
};

// Alternates thermal_step on both accelerators with rebalance. Each NPU heats
// toward 2 * share * utilization * complexity so an even split matches the
// single-engine steady state. Stops once the imbalance is within `tolerance`.
MigrationResult simulate_migration(NpuSplit split, double utilization, double complexity_factor,
                                   double dt_ms, double time_constant_ms, double smoothing,
                                   double tolerance, int max_steps);

}  // namespace chipsim
