#include "chipsim/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chipsim/errors.hpp"

namespace chipsim {
namespace {

using nlohmann::json;

std::string num(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

const std::array<const char*, 13> kColumns = {
    "scenario", "workload", "batch",    "latency_mean", "latency_std",  "throughput", "power",
    "tops_per_watt", "energy", "realtime", "samples", "nonconverged", "seed"};

json row_json(const RunStats& r) {
    return json{{"scenario", r.scenario},
                {"workload", r.workload},
                {"batch", r.batch},
                {"latency_mean", r.latency_mean},
                {"latency_std", r.latency_std},
                {"throughput", r.throughput},
                {"power", r.power_mean},
                {"tops_per_watt", r.tops_per_watt},
                {"energy", r.energy_mj},
                {"realtime", r.realtime_ok},
                {"samples", r.samples},
                {"nonconverged", r.nonconverged},
                {"seed", r.seed}};
}

RunStats row_from_json(const json& j) {
    RunStats r;
    r.scenario = j.at("scenario").get<std::string>();
    r.workload = j.at("workload").get<std::string>();
    r.batch = j.at("batch").get<int>();
    r.latency_mean = j.at("latency_mean").get<double>();
    r.latency_std = j.at("latency_std").get<double>();
    r.throughput = j.at("throughput").get<double>();
    r.power_mean = j.at("power").get<double>();
    r.tops_per_watt = j.at("tops_per_watt").get<double>();
    r.energy_mj = j.at("energy").get<double>();
    r.realtime_ok = j.at("realtime").get<bool>();
    r.samples = j.at("samples").get<int>();
    r.nonconverged = j.at("nonconverged").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
}

template <typename T>
T parse_number(std::string_view cell, int line) {
    T v{};
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
        throw std::runtime_error("results line " + std::to_string(line) + ": bad number '" +
                                 std::string(cell) + "'");
    }
    return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> cells;
    while (true) {
        const auto comma = line.find(',');
        cells.push_back(line.substr(0, comma));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return cells;
}

std::string row_ref(const std::string& scenario, const std::string& workload, int batch) {
    return scenario + " / " + workload + " / " + std::to_string(batch);
}

json source(const RunStats& r) {
    return json{{"scenario", r.scenario}, {"workload", r.workload}, {"batch", r.batch}};
}

}  // namespace

std::string emit_results(const std::vector<RunStats>& stats, OutputFormat format) {
    if (format == OutputFormat::structured) {
        json rows = json::array();
        for (const auto& r : stats) rows.push_back(row_json(r));
        json doc{{"schema_version", kResultsSchemaVersion},
                 {"kind", "chipsim.results"},
                 {"columns", kColumns},
                 {"rows", rows}};
        return doc.dump(2) + "\n";
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < kColumns.size(); ++i) os << (i ? "," : "") << kColumns[i];
    os << "\n";
    for (const auto& r : stats) {
        os << r.scenario << ',' << r.workload << ',' << r.batch << ',' << num(r.latency_mean) << ','
           << num(r.latency_std) << ',' << num(r.throughput) << ',' << num(r.power_mean) << ','
           << num(r.tops_per_watt) << ',' << num(r.energy_mj) << ','
           << (r.realtime_ok ? "pass" : "fail") << ',' << r.samples << ',' << r.nonconverged << ','
           << r.seed << "\n";
    }
    return os.str();
}

std::vector<RunStats> parse_results(std::string_view text, OutputFormat format) {
    std::vector<RunStats> out;
    if (format == OutputFormat::structured) {
        const auto doc = json::parse(text);
        const int version = doc.at("schema_version").get<int>();
        if (version != kResultsSchemaVersion) {
            throw std::runtime_error("unsupported results schema_version " + std::to_string(version));
        }
        for (const auto& j : doc.at("rows")) out.push_back(row_from_json(j));
        return out;
    }

    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto eol = text.find('\n', pos);
        const auto line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != kColumns.size()) {
            throw std::runtime_error("results line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(kColumns.size()) + " columns");
        }
        if (line_no == 1) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i] != kColumns[i]) throw std::runtime_error("results header mismatch");
            }
            continue;
        }
        RunStats r;
        r.scenario = std::string(cells[0]);
        r.workload = std::string(cells[1]);
        r.batch = parse_number<int>(cells[2], line_no);
        r.latency_mean = parse_number<double>(cells[3], line_no);
        r.latency_std = parse_number<double>(cells[4], line_no);
        r.throughput = parse_number<double>(cells[5], line_no);
        r.power_mean = parse_number<double>(cells[6], line_no);
        r.tops_per_watt = parse_number<double>(cells[7], line_no);
        r.energy_mj = parse_number<double>(cells[8], line_no);
        if (cells[9] != "pass" && cells[9] != "fail") {
            throw std::runtime_error("results line " + std::to_string(line_no) + ": bad realtime flag");
        }
        r.realtime_ok = cells[9] == "pass";
        r.samples = parse_number<int>(cells[10], line_no);
        r.nonconverged = parse_number<int>(cells[11], line_no);
        r.seed = parse_number<std::uint64_t>(cells[12], line_no);
        out.push_back(std::move(r));
    }
    return out;
}

std::string emit_plotdata(const std::vector<RunStats>& stats, const PlotSelection& sel) {
    std::vector<std::string> missing;
    std::vector<std::string> scenarios;
    std::vector<std::string> workloads;
    std::set<int> batch_set;
    for (const auto& r : stats) {
        if (std::find(scenarios.begin(), scenarios.end(), r.scenario) == scenarios.end())
            scenarios.push_back(r.scenario);
        if (std::find(workloads.begin(), workloads.end(), r.workload) == workloads.end())
            workloads.push_back(r.workload);
        batch_set.insert(r.batch);
    }
    std::sort(scenarios.begin(), scenarios.end());
    std::sort(workloads.begin(), workloads.end());

    const auto lookup = [&](const char* panel, const std::string& s, const std::string& w,
                            int b) -> const RunStats* {
        auto it = std::find_if(stats.begin(), stats.end(), [&](const RunStats& r) {
            return r.scenario == s && r.workload == w && r.batch == b;
        });
        if (it == stats.end()) {
            missing.push_back(std::string("panel (") + panel + "): " + row_ref(s, w, b));
            return nullptr;
        }
        return &*it;
    };

    // (a) batch-1 latency bars with std whiskers, (c) batch-1 power bars.
    json bars_a = json::array();
    json bars_c = json::array();
    for (const auto& s : scenarios) {
        if (const auto* r = lookup("a", s, sel.workload, 1)) {
            bars_a.push_back({{"label", s},
                              {"value", r->latency_mean},
                              {"error", r->latency_std},
                              {"sources", json::array({source(*r)})}});
        }
        if (const auto* r = lookup("c", s, sel.workload, 1)) {
            bars_c.push_back({{"label", s}, {"value", r->power_mean}, {"sources", json::array({source(*r)})}});
        }
    }

    // (b) throughput vs batch, one curve per scenario.
    json curves_b = json::array();
    for (const auto& s : scenarios) {
        json points = json::array();
        json sources = json::array();
        for (int b : batch_set) {
            if (const auto* r = lookup("b", s, sel.workload, b)) {
                points.push_back({{"x", b}, {"y", r->throughput}});
                sources.push_back(source(*r));
            }
        }
        curves_b.push_back({{"label", s}, {"points", points}, {"sources", sources}});
    }

    // (d) batch-1 latency per workload, grouped by scenario.
    json groups_d = json::array();
    for (const auto& s : scenarios) {
        json bars = json::array();
        json sources = json::array();
        for (const auto& w : workloads) {
            if (const auto* r = lookup("d", s, w, 1)) {
                bars.push_back({{"label", w}, {"value", r->latency_mean}, {"error", r->latency_std}});
                sources.push_back(source(*r));
            }
        }
        groups_d.push_back({{"label", s}, {"bars", bars}, {"sources", sources}});
    }

    // (e) improvement of candidate over baseline.
    json bars_e = json::array();
    {
        const auto* base = lookup("e", sel.baseline, sel.workload, 1);
        const auto* cand = lookup("e", sel.candidate, sel.workload, 1);
        if (base && cand) {
            const auto imp = improvements(*base, *cand);
            const json sources = json::array({source(*base), source(*cand)});
            bars_e.push_back({{"label", "latency"}, {"value", imp.latency_reduction_pct}, {"sources", sources}});
            bars_e.push_back({{"label", "throughput"}, {"value", imp.throughput_gain_pct}, {"sources", sources}});
            bars_e.push_back({{"label", "power"}, {"value", imp.power_reduction_pct}, {"sources", sources}});
            bars_e.push_back({{"label", "tops_per_watt"}, {"value", imp.efficiency_gain_pct}, {"sources", sources}});
        }
    }

    // (f) real-time pass/fail per workload on the candidate.
    json bars_f = json::array();
    for (const auto& w : workloads) {
        if (const auto* r = lookup("f", sel.candidate, w, 1)) {
            bars_f.push_back({{"label", w},
                              {"value", r->latency_mean},
                              {"budget", sel.realtime_budget_ms},
                              {"pass", r->latency_mean <= sel.realtime_budget_ms},
                              {"sources", json::array({source(*r)})}});
        }
    }

    if (!missing.empty()) {
        throw PlotDataError("plot data is missing " + std::to_string(missing.size()) +
                                " row(s); first: " + missing.front(),
                            missing);
    }

    const auto axis = [](const char* label, const char* unit) {
        return json{{"label", label}, {"unit", unit}};
    };
    json panels;
    panels["a"] = {{"title", "Batch-1 inference latency (" + sel.workload + ")"},
                   {"kind", "bar"},
                   {"x", axis("scenario", "")},
                   {"y", axis("latency", "ms")},
                   {"bars", bars_a}};
    panels["b"] = {{"title", "Throughput vs batch size (" + sel.workload + ")"},
                   {"kind", "line"},
                   {"x", axis("batch size", "images")},
                   {"y", axis("throughput", "images/s")},
                   {"series", curves_b}};
    panels["c"] = {{"title", "Batch-1 power (" + sel.workload + ")"},
                   {"kind", "bar"},
                   {"x", axis("scenario", "")},
                   {"y", axis("power", "mW")},
                   {"bars", bars_c}};
    panels["d"] = {{"title", "Batch-1 latency by workload"},
                   {"kind", "grouped_bar"},
                   {"x", axis("workload", "")},
                   {"y", axis("latency", "ms")},
                   {"groups", groups_d}};
    panels["e"] = {{"title", sel.candidate + " improvement over " + sel.baseline + " (" + sel.workload + ")"},
                   {"kind", "bar"},
                   {"x", axis("metric", "")},
                   {"y", axis("improvement", "%")},
                   {"bars", bars_e}};
    panels["f"] = {{"title", "Real-time capability on " + sel.candidate},
                   {"kind", "pass_fail"},
                   {"x", axis("workload", "")},
                   {"y", axis("latency", "ms")},
                   {"bars", bars_f}};

    json doc{{"schema_version", kPlotDataSchemaVersion}, {"kind", "chipsim.plotdata"}, {"panels", panels}};
    return doc.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace chipsim
