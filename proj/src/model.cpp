#include "chipsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "chipsim/errors.hpp"

namespace chipsim {

std::vector<ScenarioParams> builtin_scenarios() {
    ScenarioParams monolithic{kMonolithic, 0.0, Bandwidth::unbounded(), 1500.0, 0.0, 1.0, 0.95,
                              0.40,        1.0, 1.0,                    0.0,    1.0};
    ScenarioParams basic{kBasicChiplet, 1.5, Bandwidth::gbps(16.0), 1200.0, 35.0, 0.95, 0.85,
                         0.45,          1.0, 1.15,                  0.0,    1.0};
    ScenarioParams ai{kAiOptimized, 0.8, Bandwidth::gbps(24.0), 1100.0, 25.0, 0.90, 0.80,
                      0.42,         0.95, 1.08,                 0.6,    1.0};
    ScenarioParams poor{kPoorIntegration, 8.0, Bandwidth::gbps(8.0), 1800.0, 80.0, 1.10, 1.00,
                        0.50,             1.05, 1.25,                0.0,    1.0};
    return {monolithic, basic, ai, poor};
}

std::vector<WorkloadModel> builtin_workloads() {
    return {
        {kMobileNetV2, 3.5, 0.57, 0.8, 0.85},
        {kResNet50, 12.0, 0.57, 1.2, 0.90},
        {kRealtimeVideo, 2.0, 0.30, 1.0, 0.70},
    };
}

Topology builtin_topology() {
    Topology t;
    t.chiplets = {
        {"cpu", 5.0, 5.0, 7.0, 0.0, ChipletRole::cpu},
        {"npu0", 6.0, 4.0, 5.0, 15.0, ChipletRole::npu},
        {"npu1", 6.0, 4.0, 5.0, 15.0, ChipletRole::npu},
        {"io_power", 7.0, 3.0, 0.0, 0.0, ChipletRole::io_power},
        {"security", 3.0, 2.0, 0.0, 0.0, ChipletRole::security},
        // HBM3 stack footprint is not published; 11 x 11 mm is a placeholder.
        {"hbm3", 11.0, 11.0, 0.0, 0.0, ChipletRole::memory},
    };
    return t;
}

std::vector<int> default_batch_sizes() { return {1, 2, 4, 8, 16, 32}; }

SimConfig default_config() {
    SimConfig c;
    c.scenarios = builtin_scenarios();
    c.workloads = builtin_workloads();
    c.batch_sizes = default_batch_sizes();
    c.topology = builtin_topology();
    return c;
}

namespace {

void require(bool ok, const std::string& field, const std::string& message) {
    if (!ok) throw ValidationError(field, message);
}

bool finite(double v) { return std::isfinite(v); }

// Names are written verbatim into config section headers and selection lists.
void require_name(const std::string& name, const std::string& what) {
    require(!name.empty(), "name", what + " name must not be empty");
    require(name.find_first_of(",]#=\n\r") == std::string::npos, what + "." + name,
            what + " name may not contain ',', ']', '#', '=' or line breaks");
    require(name.front() != ' ' && name.back() != ' ', what + "." + name,
            what + " name may not start or end with a space");
}

}  // namespace

void validate(const ScenarioParams& s) {
    require_name(s.name, "scenario");
    const std::string p = "scenario." + s.name + ".";
    require(finite(s.link_latency_us) && s.link_latency_us >= 0, p + "link_latency",
            "link_latency must be >= 0");
    if (s.bandwidth.is_unbounded()) {
        require(s.link_latency_us == 0, p + "link_latency",
                "link_latency must be 0 when bandwidth is unbounded");
        require(s.comm_power_rate == 0, p + "comm_power_rate",
                "comm_power_rate must be 0 when bandwidth is unbounded");
    } else {
        require(finite(s.bandwidth.gbps()) && s.bandwidth.gbps() > 0, p + "bandwidth",
                "bandwidth must be > 0 or inf");
    }
    require(finite(s.base_power_mw) && s.base_power_mw > 0, p + "base_power",
            "base_power must be > 0");
    require(finite(s.comm_power_rate) && s.comm_power_rate >= 0, p + "comm_power_rate",
            "comm_power_rate must be >= 0");
    require(finite(s.efficiency_factor) && s.efficiency_factor > 0, p + "efficiency_factor",
            "efficiency_factor must be > 0");
    require(s.throttle_threshold >= 0 && s.throttle_threshold <= 1.5, p + "throttle_threshold",
            "throttle_threshold must be in [0, 1.5]");
    require(s.static_power_ratio > 0 && s.static_power_ratio < 1, p + "static_power_ratio",
            "static_power_ratio must be in (0, 1)");
    require(finite(s.voltage_scale) && s.voltage_scale > 0, p + "voltage_scale",
            "voltage_scale must be > 0");
    require(finite(s.protocol_overhead) && s.protocol_overhead >= 1, p + "protocol_overhead",
            "protocol_overhead must be ≥ 1");
    require(s.stream_overlap >= 0 && s.stream_overlap <= 1, p + "stream_overlap",
            "stream_overlap must be in [0, 1]");
    require(s.compression_ratio > 0 && s.compression_ratio <= 1, p + "compression_ratio",
            "compression_ratio must be in (0, 1]");
}

void validate(const WorkloadModel& w) {
    require_name(w.name, "workload");
    const std::string p = "workload." + w.name + ".";
    require(finite(w.base_compute_ms) && w.base_compute_ms > 0, p + "base_compute",
            "base_compute must be > 0");
    require(finite(w.input_size_mb) && w.input_size_mb >= 0, p + "input_size",
            "input_size must be >= 0");
    require(finite(w.complexity_factor) && w.complexity_factor > 0, p + "complexity_factor",
            "complexity_factor must be > 0");
    require(w.batch_efficiency > 0 && w.batch_efficiency <= 1, p + "batch_efficiency",
            "batch_efficiency must be in (0, 1]");
}

void validate(const ChipletSpec& c) {
    require_name(c.name, "chiplet");
    const std::string p = "chiplet." + c.name + ".";
    require(finite(c.width_mm) && c.width_mm > 0, p + "width", "width must be > 0");
    require(finite(c.height_mm) && c.height_mm > 0, p + "height", "height must be > 0");
    require(finite(c.process_node_nm) && c.process_node_nm >= 0, p + "process_node",
            "process_node must be >= 0");
    require(finite(c.peak_tops) && c.peak_tops >= 0, p + "peak_tops", "peak_tops must be >= 0");
}

void validate(const Topology& t) {
    require(finite(t.interposer_width_mm) && t.interposer_width_mm > 0,
            "topology.interposer_width", "interposer_width must be > 0");
    require(finite(t.interposer_height_mm) && t.interposer_height_mm > 0,
            "topology.interposer_height", "interposer_height must be > 0");
    require(t.fill_limit > 0 && t.fill_limit <= 1, "topology.fill_limit",
            "fill_limit must be in (0, 1]");
    require(!t.chiplets.empty(), "topology.chiplets", "at least one chiplet required");
    std::set<std::string> names;
    for (const auto& c : t.chiplets) {
        validate(c);
        require(names.insert(c.name).second, "chiplet." + c.name, "duplicate chiplet name");
    }
}

void validate(const ModelConstants& k) {
    require(finite(k.sched_overhead_ms) && k.sched_overhead_ms > 0, "constants.sched_overhead",
            "sched_overhead must be > 0");
    require(k.hops >= 1, "constants.hops", "hops must be >= 1");
    require(finite(k.ops_per_image_giga) && k.ops_per_image_giga > 0, "constants.ops_per_image",
            "ops_per_image must be > 0");
    // Zero gain is allowed and disables throttling.
    require(finite(k.throttle_gain) && k.throttle_gain >= 0, "constants.throttle_gain",
            "throttle_gain must be >= 0");
    require(finite(k.thermal_time_constant_ms) && k.thermal_time_constant_ms > 0,
            "constants.thermal_time_constant", "thermal_time_constant must be > 0");
    require(k.dvfs_idle_voltage > 0 && k.dvfs_idle_voltage <= 1, "constants.dvfs_idle_voltage",
            "dvfs_idle_voltage must be in (0, 1]");
    require(k.dvfs_util_cutoff > 0 && k.dvfs_util_cutoff <= 1, "constants.dvfs_util_cutoff",
            "dvfs_util_cutoff must be in (0, 1]");
    require(finite(k.fixed_point_tol) && k.fixed_point_tol > 0, "constants.fixed_point_tol",
            "fixed_point_tol must be > 0");
    require(k.fixed_point_max_iter >= 1, "constants.fixed_point_max_iter",
            "fixed_point_max_iter must be >= 1");
    require(finite(k.migration_smoothing) && k.migration_smoothing > 0,
            "constants.migration_smoothing", "migration_smoothing must be > 0");
}

void validate(const EconomicsConfig& e) {
    require(finite(e.defect_density) && e.defect_density >= 0, "economics.defect_density",
            "defect_density must be >= 0");
    require(finite(e.alpha) && e.alpha > 0, "economics.alpha", "alpha must be > 0");
    require(finite(e.monolithic_area_mm2) && e.monolithic_area_mm2 > 0,
            "economics.monolithic_area", "monolithic_area must be > 0");
    require(finite(e.wafer_cost) && e.wafer_cost >= 0, "economics.wafer_cost",
            "wafer_cost must be >= 0");
    require(finite(e.wafer_diameter_mm) && e.wafer_diameter_mm > 0, "economics.wafer_diameter",
            "wafer_diameter must be > 0");
    require(finite(e.test_cost_per_die) && e.test_cost_per_die >= 0,
            "economics.test_cost_per_die", "test_cost_per_die must be >= 0");
    require(finite(e.packaging_cost) && e.packaging_cost >= 0, "economics.packaging_cost",
            "packaging_cost must be >= 0");
    require(finite(e.interposer_cost) && e.interposer_cost >= 0, "economics.interposer_cost",
            "interposer_cost must be >= 0");
    require(finite(e.interposer_defect_density) && e.interposer_defect_density >= 0,
            "economics.interposer_defect_density", "interposer_defect_density must be >= 0");
}

void validate(const SimConfig& c) {
    require(!c.scenarios.empty(), "run.scenarios", "at least one scenario required");
    require(!c.workloads.empty(), "run.workloads", "at least one workload required");
    require(!c.batch_sizes.empty(), "run.batch_sizes", "at least one batch size required");
    std::set<std::string> names;
    for (const auto& s : c.scenarios) {
        validate(s);
        require(names.insert(s.name).second, "scenario." + s.name, "duplicate scenario name");
    }
    names.clear();
    for (const auto& w : c.workloads) {
        validate(w);
        require(names.insert(w.name).second, "workload." + w.name, "duplicate workload name");
    }
    std::set<int> batches;
    for (int b : c.batch_sizes) {
        require(b > 0, "run.batch_sizes", "batch sizes must be positive");
        require(batches.insert(b).second, "run.batch_sizes", "batch sizes must be unique");
    }
    require(c.samples_per_point >= 1, "run.samples_per_point", "samples_per_point must be >= 1");
    require(finite(c.noise_sigma) && c.noise_sigma >= 0, "run.noise_sigma",
            "noise_sigma must be >= 0");
    require(c.realtime_budget_ms > 0, "run.realtime_budget", "realtime_budget must be > 0");
    validate(c.constants);
    validate(c.topology);
    validate(c.economics);
}

std::string FloorplanReport::describe() const {
    std::ostringstream os;
    os << (pass ? "pass" : "violation") << ": die area " << total_area_mm2 << " mm2, budget "
       << budget_mm2 << " mm2";
    if (!pass) os << ", excess " << excess_mm2 << " mm2";
    return os.str();
}

FloorplanReport floorplan_check(const Topology& topology) {
    FloorplanReport r;
    for (const auto& c : topology.chiplets) r.total_area_mm2 += c.area_mm2();
    r.budget_mm2 = topology.fill_limit * topology.interposer_area_mm2();
    r.pass = r.total_area_mm2 <= r.budget_mm2;
    r.excess_mm2 = r.pass ? 0.0 : r.total_area_mm2 - r.budget_mm2;
    return r;
}

std::string_view to_string(ChipletRole role) {
    switch (role) {
        case ChipletRole::cpu: return "cpu";
        case ChipletRole::npu: return "npu";
        case ChipletRole::memory: return "memory";
        case ChipletRole::io_power: return "io_power";
        case ChipletRole::security: return "security";
    }
    return "?";
}

std::string_view to_string(BatchModel model) {
    return model == BatchModel::asymptotic ? "asymptotic" : "amortizing";
}

std::string_view to_string(DvfsMode mode) { return mode == DvfsMode::fixed ? "fixed" : "adaptive"; }

std::string_view to_string(YieldModel model) {
    switch (model) {
        case YieldModel::poisson: return "poisson";
        case YieldModel::murphy: return "murphy";
        case YieldModel::neg_binomial: return "negbin";
    }
    return "?";
}

std::optional<ChipletRole> parse_chiplet_role(std::string_view text) {
    for (auto r : {ChipletRole::cpu, ChipletRole::npu, ChipletRole::memory, ChipletRole::io_power,
                   ChipletRole::security}) {
        if (text == to_string(r)) return r;
    }
    return std::nullopt;
}

std::optional<BatchModel> parse_batch_model(std::string_view text) {
    if (text == "asymptotic") return BatchModel::asymptotic;
    if (text == "amortizing") return BatchModel::amortizing;
    return std::nullopt;
}

std::optional<DvfsMode> parse_dvfs_mode(std::string_view text) {
    if (text == "fixed") return DvfsMode::fixed;
    if (text == "adaptive") return DvfsMode::adaptive;
    return std::nullopt;
}

std::optional<YieldModel> parse_yield_model(std::string_view text) {
    if (text == "poisson") return YieldModel::poisson;
    if (text == "murphy") return YieldModel::murphy;
    if (text == "negbin" || text == "neg_binomial") return YieldModel::neg_binomial;
    return std::nullopt;
}

}  // namespace chipsim
