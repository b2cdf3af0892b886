#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chipsim {

// Die-to-die link bandwidth. A monolithic die has no link, which is modeled as
// an explicit unbounded value rather than an infinite float.
class Bandwidth {
public:
    static constexpr Bandwidth unbounded() noexcept { return Bandwidth{}; }
    static constexpr Bandwidth gbps(double value) noexcept { return Bandwidth{value}; }

    [[nodiscard]] constexpr bool is_unbounded() const noexcept { return !gbps_.has_value(); }
    // Precondition: !is_unbounded().
    [[nodiscard]] constexpr double gbps() const { return gbps_.value(); }

    friend constexpr bool operator==(const Bandwidth&, const Bandwidth&) = default;

private:
    constexpr Bandwidth() = default;
    constexpr explicit Bandwidth(double v) : gbps_(v) {}

    std::optional<double> gbps_;
};

// One integration scenario. Units: link_latency_us in microseconds per hop,
// base_power_mw in mW, comm_power_rate in mW drawn per unit of link duty.
struct ScenarioParams {
    std::string name;
    double link_latency_us = 0.0;
    Bandwidth bandwidth = Bandwidth::unbounded();
    double base_power_mw = 0.0;
    double comm_power_rate = 0.0;
    double efficiency_factor = 1.0;
    double throttle_threshold = 1.0;
    double static_power_ratio = 0.5;
    double voltage_scale = 1.0;
    double protocol_overhead = 1.0;
    // Fraction of link time hidden behind compute by streamed transfers.
    double stream_overlap = 0.0;
    // Fraction of payload bytes actually moved after compression.
    double compression_ratio = 1.0;

    friend bool operator==(const ScenarioParams&, const ScenarioParams&) = default;
};

struct WorkloadModel {
    std::string name;
    double base_compute_ms = 0.0;
    double input_size_mb = 0.0;
    // Thermal intensity of the workload; scales the steady-state thermal proxy.
    double complexity_factor = 1.0;
    // Asymptotic per-image compute fraction at large batch (default model).
    double batch_efficiency = 1.0;

    friend bool operator==(const WorkloadModel&, const WorkloadModel&) = default;
};

enum class ChipletRole { cpu, npu, memory, io_power, security };

struct ChipletSpec {
    std::string name;
    double width_mm = 0.0;
    double height_mm = 0.0;
    double process_node_nm = 0.0;  // 0 when unspecified
    double peak_tops = 0.0;
    ChipletRole role = ChipletRole::cpu;

    [[nodiscard]] double area_mm2() const noexcept { return width_mm * height_mm; }

    friend bool operator==(const ChipletSpec&, const ChipletSpec&) = default;
};

struct Topology {
    double interposer_width_mm = 30.0;
    double interposer_height_mm = 30.0;
    std::vector<ChipletSpec> chiplets;
    double fill_limit = 0.8;
    // Descriptive link/memory figures; not used by the latency model.
    double link_bandwidth_gbs = 30.0;
    double link_latency_ns = 2.0;
    double hbm_bandwidth_gbs = 819.0;
    double hbm_capacity_gb = 16.0;

    [[nodiscard]] double interposer_area_mm2() const noexcept {
        return interposer_width_mm * interposer_height_mm;
    }

    friend bool operator==(const Topology&, const Topology&) = default;
};

enum class BatchModel {
    asymptotic,  // per-image compute falls from base to base*e
    amortizing,  // per-image compute falls from base to base*(1-e)
};

enum class DvfsMode { fixed, adaptive };

// Model constants that the scenario/workload tables do not carry.
struct ModelConstants {
    double sched_overhead_ms = 1.2;
    int hops = 2;
    double ops_per_image_giga = 1.0;
    double throttle_gain = 0.5;
    double thermal_time_constant_ms = 50.0;
    double dvfs_idle_voltage = 0.7;
    double dvfs_util_cutoff = 0.65;
    double fixed_point_tol = 1e-4;
    int fixed_point_max_iter = 20;
    double migration_smoothing = 0.1;
    BatchModel batch_model = BatchModel::asymptotic;
    DvfsMode dvfs_mode = DvfsMode::fixed;

    friend bool operator==(const ModelConstants&, const ModelConstants&) = default;
};

enum class YieldModel { poisson, murphy, neg_binomial };

// Inputs for the yield/cost comparison carried alongside a simulation config.
struct EconomicsConfig {
    double defect_density = 0.51;  // defects per cm^2
    double alpha = 3.0;
    YieldModel model = YieldModel::poisson;
    double monolithic_area_mm2 = 360.0;
    double wafer_cost = 10000.0;
    double wafer_diameter_mm = 300.0;
    double test_cost_per_die = 0.0;
    double packaging_cost = 30.0;
    double interposer_cost = 40.0;
    double interposer_defect_density = 0.05;

    friend bool operator==(const EconomicsConfig&, const EconomicsConfig&) = default;
};

struct SimConfig {
    std::vector<ScenarioParams> scenarios;
    std::vector<WorkloadModel> workloads;
    std::vector<int> batch_sizes;
    std::uint64_t seed = 0;
    int samples_per_point = 100;
    double noise_sigma = 0.05;
    ModelConstants constants;
    Topology topology;
    double realtime_budget_ms = 5.0;
    EconomicsConfig economics;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

inline constexpr const char* kMonolithic = "Monolithic SoC";
inline constexpr const char* kBasicChiplet = "Basic Chiplet";
inline constexpr const char* kAiOptimized = "AI-Optimized Chiplet";
inline constexpr const char* kPoorIntegration = "Poor Integration";

inline constexpr const char* kMobileNetV2 = "MobileNetV2";
inline constexpr const char* kResNet50 = "ResNet-50";
inline constexpr const char* kRealtimeVideo = "Real-time Video";

std::vector<ScenarioParams> builtin_scenarios();
std::vector<WorkloadModel> builtin_workloads();
Topology builtin_topology();
std::vector<int> default_batch_sizes();

// Built-in scenarios, workloads, topology and batch sweep with default run settings.
SimConfig default_config();

// Each throws ValidationError naming the first violated field.
void validate(const ScenarioParams& scenario);
void validate(const WorkloadModel& workload);
void validate(const ChipletSpec& chiplet);
void validate(const Topology& topology);
void validate(const ModelConstants& constants);
void validate(const EconomicsConfig& economics);
void validate(const SimConfig& config);

struct FloorplanReport {
    bool pass = true;
    double total_area_mm2 = 0.0;
    double budget_mm2 = 0.0;
    double excess_mm2 = 0.0;  // 0 when passing

    [[nodiscard]] std::string describe() const;
};

FloorplanReport floorplan_check(const Topology& topology);

std::string_view to_string(ChipletRole role);
std::string_view to_string(BatchModel model);
std::string_view to_string(DvfsMode mode);
std::string_view to_string(YieldModel model);
std::optional<ChipletRole> parse_chiplet_role(std::string_view text);
std::optional<BatchModel> parse_batch_model(std::string_view text);
std::optional<DvfsMode> parse_dvfs_mode(std::string_view text);
std::optional<YieldModel> parse_yield_model(std::string_view text);

}  // namespace chipsim
