// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "chipsim/harness.hpp"
#include "chipsim/model.hpp"
#include "chipsim/perf.hpp"
#include "chipsim/power_thermal.hpp"
#include "chipsim/report.hpp"
#include "chipsim/yield_cost.hpp"

using namespace chipsim;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) detail << "; ";
            else detail.str("");
            pass = false;
            detail << "FAILED " << what;
        }
    }
};

SimConfig noiseless() {
    auto c = default_config();
    c.noise_sigma = 0.0;
    return c;
}

const std::vector<RunStats>& noiseless_grid() {
    static const auto rows = run_grid(noiseless());
    return rows;
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

std::string fmt(double v, int precision = 4) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v;
    return os.str();
}

const ScenarioParams& scenario(const SimConfig& c, const std::string& name) {
    return *std::find_if(c.scenarios.begin(), c.scenarios.end(),
                         [&](const ScenarioParams& s) { return s.name == name; });
}

const WorkloadModel& workload(const SimConfig& c, const std::string& name) {
    return *std::find_if(c.workloads.begin(), c.workloads.end(),
                         [&](const WorkloadModel& w) { return w.name == name; });
}

Outcome calibration_anchor() {
    Outcome o;
    const auto& r = find_row(noiseless_grid(), kMonolithic, kMobileNetV2, 1);
    o.expect(r.latency_mean == 4.7, "latency " + fmt(r.latency_mean, 12) + " != 4.7");
    o.expect(r.latency_std == 0.0, "nonzero std");
    if (o.pass) o.detail << "Monolithic/MobileNetV2/B=1 latency = " << fmt(r.latency_mean, 3) << " ms";
    return o;
}

Outcome table_reproduction() {
    Outcome o;
    struct Target {
        const char* scenario;
        double latency, power;
    };
    const Target targets[] = {{kMonolithic, 4.7, 1284},
                              {kBasicChiplet, 4.8, 1026},
                              {kAiOptimized, 4.1, 860},
                              {kPoorIntegration, 6.2, 1776}};
    std::ostringstream summary;
    for (const auto& t : targets) {
        const auto& r = find_row(noiseless_grid(), t.scenario, kMobileNetV2, 1);
        const double dl = (r.latency_mean - t.latency) / t.latency;
        const double dp = (r.power_mean - t.power) / t.power;
        o.expect(std::abs(dl) <= 0.08, std::string(t.scenario) + " latency off by " + fmt(dl * 100, 1) + "%");
        o.expect(std::abs(dp) <= 0.08, std::string(t.scenario) + " power off by " + fmt(dp * 100, 1) + "%");
        summary << fmt(r.latency_mean, 3) << "ms/" << fmt(r.power_mean, 0) << "mW ";
    }
    if (o.pass) o.detail << "within 8%: " << summary.str();
    return o;
}

Outcome throughput_identity() {
    Outcome o;
    auto c = default_config();
    c.seed = 3;
    for (const auto& grid : {noiseless_grid(), run_grid(c)}) {
        for (const auto& r : grid) {
            const double lhs = r.throughput * r.latency_mean;
            o.expect(std::abs(lhs - 1000.0 * r.batch) <= 1e-9 * 1000.0 * r.batch,
                     "identity broken at " + r.scenario + "/" + r.workload);
        }
    }
    const double t = throughput(1, 4.1);
    o.expect(within(t, 243.9, 0.05), "throughput(1, 4.1) = " + fmt(t, 2));
    o.expect(std::lround(t) == 244, "does not round to 244");
    if (o.pass) o.detail << "144 rows satisfy T*L = 1000B; throughput(1, 4.1) = " << fmt(t, 1);
    return o;
}

Outcome efficiency_arithmetic() {
    Outcome o;
    const double a = tops_per_watt(244, 860, 1.0);
    const double b = tops_per_watt(208, 1026, 1.0);
    const double e = energy_per_inference_mj(860, 244);
    o.expect(within(a, 0.2837, 5e-5), "tops_per_watt(244, 860) = " + fmt(a));
    o.expect(within(a, 0.284, 5e-4), "0.2837 does not match 0.284 to 3 decimals");
    o.expect(within(b, 0.2027, 5e-5), "tops_per_watt(208, 1026) = " + fmt(b));
    o.expect(within(b, 0.203, 5e-4), "0.2027 does not match 0.203 to 3 decimals");
    o.expect(within(e, 3.52, 0.005), "energy = " + fmt(e));
    o.expect(within(e, 3.5, 0.05), "energy not within 0.05 of 3.5 mJ");
    if (o.pass) o.detail << "TOPS/W " << fmt(a) << ", " << fmt(b) << "; energy " << fmt(e, 2) << " mJ";
    return o;
}

Outcome improvement_bands() {
    Outcome o;
    const auto imp = improvements(noiseless_grid(), kBasicChiplet, kAiOptimized, kMobileNetV2, 1);
    const auto band = [&](double v, double lo, double hi, const char* name) {
        o.expect(v >= lo && v <= hi, std::string(name) + " " + fmt(v, 1) + "% outside [" + fmt(lo, 0) +
                                         ", " + fmt(hi, 0) + "]");
    };
    band(imp.latency_reduction_pct, 8, 20, "latency reduction");
    band(imp.throughput_gain_pct, 9, 25, "throughput gain");
    band(imp.power_reduction_pct, 12, 20, "power reduction");
    band(imp.efficiency_gain_pct, 28, 50, "TOPS/W gain");
    if (o.pass) {
        o.detail << "latency -" << fmt(imp.latency_reduction_pct, 1) << "%, throughput +"
                 << fmt(imp.throughput_gain_pct, 1) << "%, power -" << fmt(imp.power_reduction_pct, 1)
                 << "%, TOPS/W +" << fmt(imp.efficiency_gain_pct, 1) << "%";
    }
    return o;
}

Outcome ordering() {
    Outcome o;
    int assertions = 0;
    for (const auto& w : builtin_workloads()) {
        for (int b : default_batch_sizes()) {
            const auto& ai = find_row(noiseless_grid(), kAiOptimized, w.name, b);
            const auto& basic = find_row(noiseless_grid(), kBasicChiplet, w.name, b);
            const auto& poor = find_row(noiseless_grid(), kPoorIntegration, w.name, b);
            const std::string at = w.name + "/B=" + std::to_string(b);
            o.expect(ai.latency_mean < basic.latency_mean && basic.latency_mean < poor.latency_mean,
                     "latency order at " + at);
            o.expect(ai.power_mean < basic.power_mean && basic.power_mean < poor.power_mean,
                     "power order at " + at);
            assertions += 2;
        }
    }
    if (o.pass) o.detail << assertions << " assertions: AI < Basic < Poor in latency and power";
    return o;
}

Outcome realtime() {
    Outcome o;
    const auto table = realtime_table(noiseless_grid(), kAiOptimized, 5.0);
    std::ostringstream summary;
    for (const auto& e : table) {
        const bool expected = e.workload != kResNet50;
        o.expect(e.pass == expected, e.workload + " " + (e.pass ? "passed" : "failed") +
                                         " at " + fmt(e.latency_ms, 2) + " ms");
        summary << e.workload << " " << (e.pass ? "pass" : "fail") << " (" << fmt(e.latency_ms, 2)
                << " ms) ";
    }
    o.expect(table.size() == 3, "expected three workloads");
    if (o.pass) o.detail << summary.str();
    return o;
}

Outcome yield_claims() {
    Outcome o;
    const double mono = yield_estimate({360.0, 0.51, 3.0, YieldModel::poisson});
    const double cpu = yield_estimate({25.0, 0.51, 3.0, YieldModel::poisson});
    o.expect(within(mono, 0.159, 0.005), "yield(360) = " + fmt(mono));
    o.expect(mono < 0.16, "yield(360) not below 16%");
    o.expect(cpu >= 0.87, "yield(25) = " + fmt(cpu));
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> ad(0.0, 10.0), alpha(0.01, 50.0);
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
        const double a = ad(rng) * 100.0, al = alpha(rng);
        if (yield_estimate({a, 1.0, al, YieldModel::neg_binomial}) <
            yield_estimate({a, 1.0, al, YieldModel::poisson}))
            ++violations;
    }
    o.expect(violations == 0, std::to_string(violations) + " draws with NB < Poisson");
    if (o.pass) o.detail << "Poisson(360) = " << fmt(mono) << ", Poisson(25) = " << fmt(cpu) << ", NB >= Poisson in 1000 draws";
    return o;
}

Outcome determinism() {
    Outcome o;
    auto c = default_config();
    c.seed = 0xC0FFEE;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto serial = run_grid(c, 1);
    const auto wide = run_grid(c, std::max(hw, 72u));
    const auto again = run_grid(c, hw);
    const auto a = emit_results(serial, OutputFormat::structured);
    o.expect(a == emit_results(wide, OutputFormat::structured), "serial vs max-parallel results differ");
    o.expect(a == emit_results(again, OutputFormat::structured), "repeat run differs");
    o.expect(emit_plotdata(serial, {}) == emit_plotdata(wide, {}), "plot data differs");
    o.expect(emit_results(serial, OutputFormat::tabular) == emit_results(wide, OutputFormat::tabular),
             "tabular output differs");
    if (o.pass) o.detail << "byte-identical across 1, " << hw << " and " << std::max(hw, 72u) << " workers";
    return o;
}

Outcome property_suites() {
    Outcome o;
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto in = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    const ModelConstants k;

    int cases = 0;
    for (int i = 0; i < 1000; ++i, ++cases) {
        ScenarioParams s = builtin_scenarios()[1 + rng() % 3];
        s.bandwidth = Bandwidth::gbps(in(1.0, 64.0));
        s.protocol_overhead = in(1.0, 1.5);
        s.link_latency_us = in(0.0, 10.0);
        const auto w = builtin_workloads()[rng() % 3];
        const int b = 1 + static_cast<int>(rng() % 32);
        const double base = latency_point(s, w, k, b).total;
        auto wider = s;
        wider.bandwidth = Bandwidth::gbps(s.bandwidth.gbps() * in(1.0, 3.0));
        auto heavier = s;
        heavier.protocol_overhead += in(0.0, 0.5);
        if (latency_point(wider, w, k, b).total > base) o.expect(false, "latency rose with bandwidth");
        if (latency_point(heavier, w, k, b).total < base) o.expect(false, "latency fell with overhead");
        if (latency_point(s, w, k, b + 1).total < base) o.expect(false, "latency fell with batch");
    }

    const DvfsPolicy fixed{DvfsMode::fixed, k.dvfs_idle_voltage, k.dvfs_util_cutoff};
    const DvfsPolicy adaptive{DvfsMode::adaptive, k.dvfs_idle_voltage, k.dvfs_util_cutoff};
    for (int i = 0; i < 1000; ++i) {
        auto s = builtin_scenarios()[rng() % 4];
        const auto w = builtin_workloads()[rng() % 3];
        const auto bd = latency_point(s, w, k, 1 + static_cast<int>(rng() % 32));
        const double u = unit(rng);
        const double pf = power_draw_mw(s, bd, u, fixed);
        const double pa = power_draw_mw(s, bd, u, adaptive);
        const double floor = s.base_power_mw * s.static_power_ratio *
                             std::pow(s.voltage_scale * k.dvfs_idle_voltage, 2);
        if (pa > pf) o.expect(false, "adaptive DVFS raised power");
        if (pa < floor - 1e-9 || pf < floor - 1e-9) o.expect(false, "power below floor");
        const double comm = s.comm_power_rate * bd.comm_total / bd.total;
        auto hot = s;
        hot.voltage_scale *= 1.2;
        const double scaled = power_draw_mw(hot, bd, u, fixed) - comm;
        if (std::abs(scaled - (pf - comm) * 1.44) > 1e-9 * pf) o.expect(false, "V^2 scaling broken");
    }
    {
        const auto c = default_config();
        const auto& s = scenario(c, kMonolithic);
        const auto bd = latency_point(s, workload(c, kRealtimeVideo), k, 1);
        const double u = utilization(bd);
        const double pf = power_draw_mw(s, bd, u, fixed);
        const double saving = (pf - power_draw_mw(s, bd, u, adaptive)) / pf;
        o.expect(u <= 0.63, "video utilization " + fmt(u));
        o.expect(saving >= 0.08, "adaptive saving " + fmt(saving * 100, 1) + "%");
    }

    double worst_residual = 0.0;
    for (const auto& s : builtin_scenarios())
        for (const auto& w : builtin_workloads())
            for (int b : default_batch_sizes()) {
                const auto sp = steady_point(s, w, k, b, fixed);
                const double theta = steady_theta(utilization(sp.breakdown), w.complexity_factor);
                const double implied = throttle_factor(theta, s.throttle_threshold, k.throttle_gain);
                worst_residual = std::max(worst_residual, std::abs(implied - sp.breakdown.throttle_factor));
            }
    o.expect(worst_residual <= 1e-4, "throttle residual " + std::to_string(worst_residual));

    double worst_imbalance = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const NpuSplit split{0.5, {in(0, 2)}, {in(0, 2)}};
        const auto r = rebalance(split);
        const auto swapped = rebalance({0.5, split.npu1, split.npu0});
        if (std::abs(swapped.phi - (1.0 - r.phi)) > 1e-12 || r.phi < 0 || r.phi > 1)
            o.expect(false, "rebalance symmetry/conservation");
        const auto m = simulate_migration({in(0, 1), {in(0, 2)}, {in(0, 2)}}, in(0.2, 1.0), in(0.5, 1.2),
                                          5.0, k.thermal_time_constant_ms, k.migration_smoothing, 0.01,
                                          10'000);
        worst_imbalance = std::max(worst_imbalance, m.imbalance);
    }
    o.expect(worst_imbalance <= 0.01, "migration imbalance " + fmt(worst_imbalance));

    if (o.pass) {
        o.detail << cases << " monotonicity cases, 1000 power cases, throttle residual "
                 << std::scientific << std::setprecision(1) << worst_residual << std::fixed
                 << ", migration imbalance <= " << fmt(worst_imbalance, 4);
    }
    return o;
}

Outcome statistical_band() {
    Outcome o;
    auto c = default_config();
    c.noise_sigma = 0.05;
    c.samples_per_point = 100;
    const auto rows = run_grid(c);
    double lo = 1.0, hi = 0.0;
    for (const auto& r : rows) {
        const double ratio = r.latency_std / r.latency_mean;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        o.expect(ratio >= 0.03 && ratio <= 0.07,
                 r.scenario + "/" + r.workload + "/B=" + std::to_string(r.batch) + " ratio " + fmt(ratio));
    }
    if (o.pass) o.detail << rows.size() << " points, std/mean in [" << fmt(lo) << ", " << fmt(hi) << "]";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"1  calibration anchor", calibration_anchor},
        {"2  reference latency/power (+/-8%)", table_reproduction},
        {"3  throughput identity", throughput_identity},
        {"4  efficiency arithmetic", efficiency_arithmetic},
        {"5  improvement bands", improvement_bands},
        {"6  scenario ordering", ordering},
        {"7  real-time table", realtime},
        {"8  yield", yield_claims},
        {"9  determinism", determinism},
        {"10 property suites", property_suites},
        {"11 statistical band", statistical_band},
    };

    int failures = 0;
    const auto start = std::chrono::steady_clock::now();
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail.str(std::string("exception: ") + e.what());
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS " : "FAIL ") << std::left << std::setw(36) << name << o.detail.str()
                  << "\n";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << " in " << std::fixed << std::setprecision(2) << secs << " s\n";
    return failures == 0 ? 0 : 1;
}
