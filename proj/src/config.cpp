#include "chipsim/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "chipsim/errors.hpp"

namespace chipsim {
namespace {

struct Field {
    std::string key;
    std::string value;
    int line = 0;
    int key_column = 0;
    int value_column = 0;
};

[[noreturn]] void fail(const Field& f, const std::string& message) {
    throw ConfigSyntaxError(f.line, f.value_column, "'" + f.key + "': " + message);
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double as_double(const Field& f) {
    double v = 0.0;
    const char* begin = f.value.data();
    const char* end = begin + f.value.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || f.value.empty()) fail(f, "expected a number");
    return v;
}

double as_finite(const Field& f) {
    const double v = as_double(f);
    if (!std::isfinite(v)) fail(f, "expected a finite number");
    return v;
}

template <typename Int>
Int as_integer(const Field& f) {
    Int v{};
    const char* begin = f.value.data();
    const char* end = begin + f.value.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || f.value.empty()) fail(f, "expected an integer");
    return v;
}

std::vector<std::string> as_list(const Field& f) {
    std::vector<std::string> out;
    if (f.value.empty()) return out;
    std::string_view rest = f.value;
    while (true) {
        const auto comma = rest.find(',');
        const auto item = trim(rest.substr(0, comma));
        if (item.empty()) fail(f, "empty list item");
        out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

Bandwidth as_bandwidth(const Field& f) {
    if (f.value == "inf" || f.value == "unbounded") return Bandwidth::unbounded();
    return Bandwidth::gbps(as_finite(f));
}

template <typename Enum>
Enum as_enum(const Field& f, std::optional<Enum> (*parse)(std::string_view)) {
    auto v = parse(f.value);
    if (!v) fail(f, "unrecognized value '" + f.value + "'");
    return *v;
}

template <typename T>
using Setter = std::function<void(T&, const Field&)>;

template <typename T>
using SetterTable = std::map<std::string, Setter<T>, std::less<>>;

const SetterTable<ScenarioParams>& scenario_keys() {
    static const SetterTable<ScenarioParams> table = {
        {"link_latency", [](ScenarioParams& s, const Field& f) { s.link_latency_us = as_finite(f); }},
        {"bandwidth", [](ScenarioParams& s, const Field& f) { s.bandwidth = as_bandwidth(f); }},
        {"base_power", [](ScenarioParams& s, const Field& f) { s.base_power_mw = as_finite(f); }},
        {"comm_power_rate", [](ScenarioParams& s, const Field& f) { s.comm_power_rate = as_finite(f); }},
        {"efficiency_factor", [](ScenarioParams& s, const Field& f) { s.efficiency_factor = as_finite(f); }},
        {"throttle_threshold", [](ScenarioParams& s, const Field& f) { s.throttle_threshold = as_finite(f); }},
        {"static_power_ratio", [](ScenarioParams& s, const Field& f) { s.static_power_ratio = as_finite(f); }},
        {"voltage_scale", [](ScenarioParams& s, const Field& f) { s.voltage_scale = as_finite(f); }},
        {"protocol_overhead", [](ScenarioParams& s, const Field& f) { s.protocol_overhead = as_finite(f); }},
        {"stream_overlap", [](ScenarioParams& s, const Field& f) { s.stream_overlap = as_finite(f); }},
        {"compression_ratio", [](ScenarioParams& s, const Field& f) { s.compression_ratio = as_finite(f); }},
    };
    return table;
}

const SetterTable<WorkloadModel>& workload_keys() {
    static const SetterTable<WorkloadModel> table = {
        {"base_compute", [](WorkloadModel& w, const Field& f) { w.base_compute_ms = as_finite(f); }},
        {"input_size", [](WorkloadModel& w, const Field& f) { w.input_size_mb = as_finite(f); }},
        {"complexity_factor", [](WorkloadModel& w, const Field& f) { w.complexity_factor = as_finite(f); }},
        {"batch_efficiency", [](WorkloadModel& w, const Field& f) { w.batch_efficiency = as_finite(f); }},
    };
    return table;
}

const SetterTable<ChipletSpec>& chiplet_keys() {
    static const SetterTable<ChipletSpec> table = {
        {"width", [](ChipletSpec& c, const Field& f) { c.width_mm = as_finite(f); }},
        {"height", [](ChipletSpec& c, const Field& f) { c.height_mm = as_finite(f); }},
        {"process_node", [](ChipletSpec& c, const Field& f) { c.process_node_nm = as_finite(f); }},
        {"peak_tops", [](ChipletSpec& c, const Field& f) { c.peak_tops = as_finite(f); }},
        {"role", [](ChipletSpec& c, const Field& f) { c.role = as_enum(f, parse_chiplet_role); }},
    };
    return table;
}

const SetterTable<ModelConstants>& constants_keys() {
    static const SetterTable<ModelConstants> table = {
        {"sched_overhead", [](ModelConstants& k, const Field& f) { k.sched_overhead_ms = as_finite(f); }},
        {"hops", [](ModelConstants& k, const Field& f) { k.hops = as_integer<int>(f); }},
        {"ops_per_image", [](ModelConstants& k, const Field& f) { k.ops_per_image_giga = as_finite(f); }},
        {"throttle_gain", [](ModelConstants& k, const Field& f) { k.throttle_gain = as_finite(f); }},
        {"thermal_time_constant", [](ModelConstants& k, const Field& f) { k.thermal_time_constant_ms = as_finite(f); }},
        {"dvfs_idle_voltage", [](ModelConstants& k, const Field& f) { k.dvfs_idle_voltage = as_finite(f); }},
        {"dvfs_util_cutoff", [](ModelConstants& k, const Field& f) { k.dvfs_util_cutoff = as_finite(f); }},
        {"fixed_point_tol", [](ModelConstants& k, const Field& f) { k.fixed_point_tol = as_finite(f); }},
        {"fixed_point_max_iter", [](ModelConstants& k, const Field& f) { k.fixed_point_max_iter = as_integer<int>(f); }},
        {"migration_smoothing", [](ModelConstants& k, const Field& f) { k.migration_smoothing = as_finite(f); }},
        {"batch_model", [](ModelConstants& k, const Field& f) { k.batch_model = as_enum(f, parse_batch_model); }},
        {"dvfs_mode", [](ModelConstants& k, const Field& f) { k.dvfs_mode = as_enum(f, parse_dvfs_mode); }},
    };
    return table;
}

const SetterTable<Topology>& topology_keys() {
    static const SetterTable<Topology> table = {
        {"interposer_width", [](Topology& t, const Field& f) { t.interposer_width_mm = as_finite(f); }},
        {"interposer_height", [](Topology& t, const Field& f) { t.interposer_height_mm = as_finite(f); }},
        {"fill_limit", [](Topology& t, const Field& f) { t.fill_limit = as_finite(f); }},
        {"link_bandwidth", [](Topology& t, const Field& f) { t.link_bandwidth_gbs = as_finite(f); }},
        {"link_latency", [](Topology& t, const Field& f) { t.link_latency_ns = as_finite(f); }},
        {"hbm_bandwidth", [](Topology& t, const Field& f) { t.hbm_bandwidth_gbs = as_finite(f); }},
        {"hbm_capacity", [](Topology& t, const Field& f) { t.hbm_capacity_gb = as_finite(f); }},
    };
    return table;
}

const SetterTable<EconomicsConfig>& economics_keys() {
    static const SetterTable<EconomicsConfig> table = {
        {"defect_density", [](EconomicsConfig& e, const Field& f) { e.defect_density = as_finite(f); }},
        {"alpha", [](EconomicsConfig& e, const Field& f) { e.alpha = as_finite(f); }},
        {"model", [](EconomicsConfig& e, const Field& f) { e.model = as_enum(f, parse_yield_model); }},
        {"monolithic_area", [](EconomicsConfig& e, const Field& f) { e.monolithic_area_mm2 = as_finite(f); }},
        {"wafer_cost", [](EconomicsConfig& e, const Field& f) { e.wafer_cost = as_finite(f); }},
        {"wafer_diameter", [](EconomicsConfig& e, const Field& f) { e.wafer_diameter_mm = as_finite(f); }},
        {"test_cost_per_die", [](EconomicsConfig& e, const Field& f) { e.test_cost_per_die = as_finite(f); }},
        {"packaging_cost", [](EconomicsConfig& e, const Field& f) { e.packaging_cost = as_finite(f); }},
        {"interposer_cost", [](EconomicsConfig& e, const Field& f) { e.interposer_cost = as_finite(f); }},
        {"interposer_defect_density", [](EconomicsConfig& e, const Field& f) { e.interposer_defect_density = as_finite(f); }},
    };
    return table;
}

const std::set<std::string, std::less<>> kScenarioRequired = {
    "link_latency",      "bandwidth",          "base_power",         "comm_power_rate",
    "efficiency_factor", "throttle_threshold", "static_power_ratio", "voltage_scale"};
const std::set<std::string, std::less<>> kWorkloadRequired = {
    "base_compute", "input_size", "complexity_factor", "batch_efficiency"};
const std::set<std::string, std::less<>> kChipletRequired = {"width", "height", "role"};

struct Section {
    std::string kind;  // run, constants, scenario, ...
    std::string name;  // entity name for scenario/workload/chiplet sections
    int line = 0;
    std::vector<Field> fields;
};

std::vector<Section> tokenize(std::string_view text) {
    std::vector<Section> sections;
    std::set<std::pair<std::string, std::string>> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const auto body = trim(raw);
        if (body.empty()) continue;
        const int indent = static_cast<int>(raw.find_first_not_of(" \t")) + 1;

        if (body.front() == '[') {
            if (body.back() != ']') {
                throw ConfigSyntaxError(line_no, indent + static_cast<int>(body.size()),
                                        "expected ']' to close section header");
            }
            const auto header = trim(body.substr(1, body.size() - 2));
            Section s;
            s.line = line_no;
            const auto dot = header.find('.');
            s.kind = std::string(header.substr(0, dot));
            if (dot != std::string_view::npos) s.name = std::string(trim(header.substr(dot + 1)));
            const bool named = s.kind == "scenario" || s.kind == "workload" || s.kind == "chiplet";
            const bool plain = s.kind == "run" || s.kind == "constants" || s.kind == "topology" ||
                               s.kind == "economics";
            if (!named && !plain) {
                throw ConfigSyntaxError(line_no, indent + 1, "unknown section '" + std::string(header) + "'");
            }
            if (named && s.name.empty()) {
                throw ConfigSyntaxError(line_no, indent + 1, "section [" + s.kind + ".<name>] needs a name");
            }
            if (plain && dot != std::string_view::npos) {
                throw ConfigSyntaxError(line_no, indent + 1, "section [" + s.kind + "] takes no name");
            }
            if (s.name.find_first_of(",]") != std::string::npos) {
                throw ConfigSyntaxError(line_no, indent + 1, "names may not contain ',' or ']'");
            }
            if (!seen.emplace(s.kind, s.name).second) {
                throw ConfigSyntaxError(line_no, indent, "duplicate section '" + std::string(header) + "'");
            }
            sections.push_back(std::move(s));
            continue;
        }

        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigSyntaxError(line_no, indent, "expected 'key = value'");
        }
        if (sections.empty()) {
            throw ConfigSyntaxError(line_no, indent, "key outside of any section");
        }
        Field f;
        f.key = std::string(trim(body.substr(0, eq)));
        f.value = std::string(trim(body.substr(eq + 1)));
        f.line = line_no;
        f.key_column = indent;
        const auto after_eq = body.substr(eq + 1);
        const auto lead = after_eq.find_first_not_of(" \t");
        f.value_column = indent + static_cast<int>(eq) + 1 +
                         static_cast<int>(lead == std::string_view::npos ? 0 : lead);
        if (f.key.empty()) throw ConfigSyntaxError(line_no, indent, "missing key before '='");
        auto& current = sections.back();
        for (const auto& prev : current.fields) {
            if (prev.key == f.key) {
                throw ConfigSyntaxError(line_no, indent, "duplicate key '" + f.key + "'");
            }
        }
        current.fields.push_back(std::move(f));
    }
    return sections;
}

template <typename T>
void apply(T& target, const Section& s, const SetterTable<T>& table) {
    for (const auto& f : s.fields) {
        auto it = table.find(f.key);
        if (it == table.end()) {
            const std::string where = s.name.empty() ? s.kind : s.kind + "." + s.name;
            throw ConfigSyntaxError(f.line, f.key_column, "unknown key '" + f.key + "' in [" + where + "]");
        }
        it->second(target, f);
    }
}

void check_required(const Section& s, const std::set<std::string, std::less<>>& required) {
    for (const auto& key : required) {
        const bool present = std::any_of(s.fields.begin(), s.fields.end(),
                                         [&](const Field& f) { return f.key == key; });
        if (!present) {
            throw ValidationError(s.kind + "." + s.name + "." + key,
                                  "[" + s.kind + "." + s.name + "] is new and must set '" + key + "'");
        }
    }
}

// Overrides or extends `pool` with the named section.
template <typename T>
void merge_entity(std::vector<T>& pool, const Section& s, const SetterTable<T>& table,
                  const std::set<std::string, std::less<>>& required) {
    auto it = std::find_if(pool.begin(), pool.end(), [&](const T& e) { return e.name == s.name; });
    if (it == pool.end()) {
        check_required(s, required);
        T fresh{};
        fresh.name = s.name;
        apply(fresh, s, table);
        pool.push_back(std::move(fresh));
    } else {
        apply(*it, s, table);
    }
}

template <typename T>
std::vector<T> select(const std::vector<T>& pool, const Field& list_field) {
    std::vector<T> out;
    std::set<std::string> picked;
    for (const auto& name : as_list(list_field)) {
        auto it = std::find_if(pool.begin(), pool.end(), [&](const T& e) { return e.name == name; });
        if (it == pool.end()) fail(list_field, "no entry named '" + name + "'");
        if (!picked.insert(name).second) fail(list_field, "'" + name + "' listed twice");
        out.push_back(*it);
    }
    return out;
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

template <typename T>
std::string join_names(const std::vector<T>& items) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += ", ";
        out += item.name;
    }
    return out;
}

}  // namespace

SimConfig parse_config(std::string_view text) {
    SimConfig config = default_config();
    const auto sections = tokenize(text);

    std::vector<ScenarioParams> scenario_pool = config.scenarios;
    std::vector<WorkloadModel> workload_pool = config.workloads;
    std::vector<ChipletSpec> chiplet_pool = config.topology.chiplets;
    std::optional<Field> scenario_pick, workload_pick, chiplet_pick;

    for (const auto& s : sections) {
        if (s.kind == "scenario") {
            merge_entity(scenario_pool, s, scenario_keys(), kScenarioRequired);
        } else if (s.kind == "workload") {
            merge_entity(workload_pool, s, workload_keys(), kWorkloadRequired);
        } else if (s.kind == "chiplet") {
            merge_entity(chiplet_pool, s, chiplet_keys(), kChipletRequired);
        } else if (s.kind == "constants") {
            apply(config.constants, s, constants_keys());
        } else if (s.kind == "economics") {
            apply(config.economics, s, economics_keys());
        } else if (s.kind == "topology") {
            Section rest = s;
            std::erase_if(rest.fields, [&](const Field& f) {
                if (f.key != "chiplets") return false;
                chiplet_pick = f;
                return true;
            });
            apply(config.topology, rest, topology_keys());
        } else if (s.kind == "run") {
            for (const auto& f : s.fields) {
                if (f.key == "seed") {
                    config.seed = as_integer<std::uint64_t>(f);
                } else if (f.key == "samples_per_point") {
                    config.samples_per_point = as_integer<int>(f);
                } else if (f.key == "noise_sigma") {
                    config.noise_sigma = as_finite(f);
                } else if (f.key == "realtime_budget") {
                    config.realtime_budget_ms = as_double(f);
                } else if (f.key == "batch_sizes") {
                    config.batch_sizes.clear();
                    for (const auto& item : as_list(f)) {
                        Field one = f;
                        one.value = item;
                        config.batch_sizes.push_back(as_integer<int>(one));
                    }
                } else if (f.key == "scenarios") {
                    scenario_pick = f;
                } else if (f.key == "workloads") {
                    workload_pick = f;
                } else {
                    throw ConfigSyntaxError(f.line, f.key_column, "unknown key '" + f.key + "' in [run]");
                }
            }
        }
    }

    config.scenarios = scenario_pick ? select(scenario_pool, *scenario_pick) : scenario_pool;
    config.workloads = workload_pick ? select(workload_pool, *workload_pick) : workload_pool;
    config.topology.chiplets = chiplet_pick ? select(chiplet_pool, *chiplet_pick) : chiplet_pool;

    validate(config);
    return config;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string render_config(const SimConfig& c) {
    std::ostringstream os;
    const auto num = [](double v) { return format_double(v); };

    os << "[run]\n";
    os << "seed = " << c.seed << "\n";
    os << "samples_per_point = " << c.samples_per_point << "\n";
    os << "noise_sigma = " << num(c.noise_sigma) << "\n";
    os << "realtime_budget = " << num(c.realtime_budget_ms) << "\n";
    os << "batch_sizes = ";
    for (std::size_t i = 0; i < c.batch_sizes.size(); ++i) os << (i ? ", " : "") << c.batch_sizes[i];
    os << "\n";
    os << "scenarios = " << join_names(c.scenarios) << "\n";
    os << "workloads = " << join_names(c.workloads) << "\n";

    const auto& k = c.constants;
    os << "\n[constants]\n";
    os << "sched_overhead = " << num(k.sched_overhead_ms) << "\n";
    os << "hops = " << k.hops << "\n";
    os << "ops_per_image = " << num(k.ops_per_image_giga) << "\n";
    os << "throttle_gain = " << num(k.throttle_gain) << "\n";
    os << "thermal_time_constant = " << num(k.thermal_time_constant_ms) << "\n";
    os << "dvfs_idle_voltage = " << num(k.dvfs_idle_voltage) << "\n";
    os << "dvfs_util_cutoff = " << num(k.dvfs_util_cutoff) << "\n";
    os << "fixed_point_tol = " << num(k.fixed_point_tol) << "\n";
    os << "fixed_point_max_iter = " << k.fixed_point_max_iter << "\n";
    os << "migration_smoothing = " << num(k.migration_smoothing) << "\n";
    os << "batch_model = " << to_string(k.batch_model) << "\n";
    os << "dvfs_mode = " << to_string(k.dvfs_mode) << "\n";

    for (const auto& s : c.scenarios) {
        os << "\n[scenario." << s.name << "]\n";
        os << "link_latency = " << num(s.link_latency_us) << "\n";
        os << "bandwidth = " << (s.bandwidth.is_unbounded() ? "inf" : num(s.bandwidth.gbps())) << "\n";
        os << "base_power = " << num(s.base_power_mw) << "\n";
        os << "comm_power_rate = " << num(s.comm_power_rate) << "\n";
        os << "efficiency_factor = " << num(s.efficiency_factor) << "\n";
        os << "throttle_threshold = " << num(s.throttle_threshold) << "\n";
        os << "static_power_ratio = " << num(s.static_power_ratio) << "\n";
        os << "voltage_scale = " << num(s.voltage_scale) << "\n";
        os << "protocol_overhead = " << num(s.protocol_overhead) << "\n";
        os << "stream_overlap = " << num(s.stream_overlap) << "\n";
        os << "compression_ratio = " << num(s.compression_ratio) << "\n";
    }

    for (const auto& w : c.workloads) {
        os << "\n[workload." << w.name << "]\n";
        os << "base_compute = " << num(w.base_compute_ms) << "\n";
        os << "input_size = " << num(w.input_size_mb) << "\n";
        os << "complexity_factor = " << num(w.complexity_factor) << "\n";
        os << "batch_efficiency = " << num(w.batch_efficiency) << "\n";
    }

    const auto& t = c.topology;
    os << "\n[topology]\n";
    os << "interposer_width = " << num(t.interposer_width_mm) << "\n";
    os << "interposer_height = " << num(t.interposer_height_mm) << "\n";
    os << "fill_limit = " << num(t.fill_limit) << "\n";
    os << "link_bandwidth = " << num(t.link_bandwidth_gbs) << "\n";
    os << "link_latency = " << num(t.link_latency_ns) << "\n";
    os << "hbm_bandwidth = " << num(t.hbm_bandwidth_gbs) << "\n";
    os << "hbm_capacity = " << num(t.hbm_capacity_gb) << "\n";
    os << "chiplets = " << join_names(t.chiplets) << "\n";

    for (const auto& ch : t.chiplets) {
        os << "\n[chiplet." << ch.name << "]\n";
        os << "width = " << num(ch.width_mm) << "\n";
        os << "height = " << num(ch.height_mm) << "\n";
        os << "process_node = " << num(ch.process_node_nm) << "\n";
        os << "peak_tops = " << num(ch.peak_tops) << "\n";
        os << "role = " << to_string(ch.role) << "\n";
    }

    const auto& e = c.economics;
    os << "\n[economics]\n";
    os << "defect_density = " << num(e.defect_density) << "\n";
    os << "alpha = " << num(e.alpha) << "\n";
    os << "model = " << to_string(e.model) << "\n";
    os << "monolithic_area = " << num(e.monolithic_area_mm2) << "\n";
    os << "wafer_cost = " << num(e.wafer_cost) << "\n";
    os << "wafer_diameter = " << num(e.wafer_diameter_mm) << "\n";
    os << "test_cost_per_die = " << num(e.test_cost_per_die) << "\n";
    os << "packaging_cost = " << num(e.packaging_cost) << "\n";
    os << "interposer_cost = " << num(e.interposer_cost) << "\n";
    os << "interposer_defect_density = " << num(e.interposer_defect_density) << "\n";
    return os.str();
}

}  // namespace chipsim
