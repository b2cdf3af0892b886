#include "chipsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "chipsim/perf.hpp"
#include "chipsim/power_thermal.hpp"

namespace chipsim {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr double kMinNoiseFactor = 0.5;

}  // namespace

std::uint64_t point_seed(std::uint64_t seed, const std::string& scenario,
                         const std::string& workload, int batch) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ fnv1a(scenario));
    // Unit separator keeps ("ab","c") and ("a","bc") apart.
    h = splitmix64(h ^ fnv1a(workload, fnv1a("\x1f")));
    return splitmix64(h ^ static_cast<std::uint64_t>(batch));
}

RunStats run_point(const SimConfig& config, const ScenarioParams& scenario,
                   const WorkloadModel& workload, int batch) {
    const auto policy = DvfsPolicy::from(config.constants);
    const bool noiseless = config.noise_sigma == 0.0;
    // Without noise every sample is identical; evaluate once so the mean is exact.
    const int draws = noiseless ? 1 : config.samples_per_point;

    std::mt19937_64 rng(point_seed(config.seed, scenario.name, workload.name, batch));
    std::normal_distribution<double> noise(1.0, noiseless ? 1.0 : config.noise_sigma);

    std::vector<double> latencies;
    std::vector<double> powers;
    latencies.reserve(draws);
    powers.reserve(draws);
    int failed = 0;
    std::string last_failure;
    for (int i = 0; i < draws; ++i) {
        const double scale = noiseless ? 1.0 : std::max(kMinNoiseFactor, noise(rng));
        try {
            const auto sp = steady_point(scenario, workload, config.constants, batch, policy, scale);
            latencies.push_back(sp.breakdown.total);
            powers.push_back(sp.power_mw);
        } catch (const ConvergenceError& e) {
            ++failed;
            last_failure = e.what();
        }
    }
    if (latencies.empty()) {
        throw GridError(last_failure, {last_failure});
    }

    RunStats r;
    r.scenario = scenario.name;
    r.workload = workload.name;
    r.batch = batch;
    r.seed = config.seed;
    r.nonconverged = failed;
    r.samples = noiseless ? config.samples_per_point : static_cast<int>(latencies.size());

    const double n = static_cast<double>(latencies.size());
    double sum = 0.0;
    for (double v : latencies) sum += v;
    r.latency_mean = sum / n;
    if (latencies.size() > 1) {
        double ss = 0.0;
        for (double v : latencies) ss += (v - r.latency_mean) * (v - r.latency_mean);
        r.latency_std = std::sqrt(ss / (n - 1.0));
    }
    double psum = 0.0;
    for (double p : powers) psum += p;
    r.power_mean = psum / n;

    r.throughput = throughput(batch, r.latency_mean);
    r.tops_per_watt = tops_per_watt(r.throughput, r.power_mean, config.constants.ops_per_image_giga);
    r.energy_mj = energy_per_inference_mj(r.power_mean, r.throughput);
    r.realtime_ok = r.latency_mean <= config.realtime_budget_ms;
    return r;
}

std::vector<RunStats> run_grid(const SimConfig& config, unsigned jobs) {
    struct Point {
        const ScenarioParams* scenario;
        const WorkloadModel* workload;
        int batch;
    };
    std::vector<const ScenarioParams*> scenarios;
    for (const auto& s : config.scenarios) scenarios.push_back(&s);
    std::vector<const WorkloadModel*> workloads;
    for (const auto& w : config.workloads) workloads.push_back(&w);
    std::vector<int> batches = config.batch_sizes;
    std::sort(scenarios.begin(), scenarios.end(),
              [](auto* a, auto* b) { return a->name < b->name; });
    std::sort(workloads.begin(), workloads.end(),
              [](auto* a, auto* b) { return a->name < b->name; });
    std::sort(batches.begin(), batches.end());

    std::vector<Point> points;
    for (auto* s : scenarios)
        for (auto* w : workloads)
            for (int b : batches) points.push_back({s, w, b});

    std::vector<RunStats> out(points.size());
    std::vector<std::string> errors(points.size());
    std::atomic<std::size_t> next{0};

    const auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            const auto& p = points[i];
            try {
                out[i] = run_point(config, *p.scenario, *p.workload, p.batch);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, points.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
        worker();
    }

    std::vector<std::string> failures;
    for (const auto& e : errors)
        if (!e.empty()) failures.push_back(e);
    if (!failures.empty()) {
        throw GridError(std::to_string(failures.size()) + " grid point(s) failed; first: " +
                            failures.front(),
                        failures);
    }
    return out;
}

const RunStats& find_row(const std::vector<RunStats>& stats, const std::string& scenario,
                         const std::string& workload, int batch) {
    auto it = std::find_if(stats.begin(), stats.end(), [&](const RunStats& r) {
        return r.scenario == scenario && r.workload == workload && r.batch == batch;
    });
    if (it == stats.end()) {
        throw std::out_of_range("no result row for " + scenario + " / " + workload + " / batch " +
                                std::to_string(batch));
    }
    return *it;
}

ImprovementReport improvements(const RunStats& base, const RunStats& cand) {
    ImprovementReport r;
    r.baseline = base.scenario;
    r.candidate = cand.scenario;
    r.workload = cand.workload;
    r.batch = cand.batch;
    r.latency_reduction_pct = (base.latency_mean - cand.latency_mean) / base.latency_mean * 100.0;
    r.throughput_gain_pct = (cand.throughput - base.throughput) / base.throughput * 100.0;
    r.power_reduction_pct = (base.power_mean - cand.power_mean) / base.power_mean * 100.0;
    r.efficiency_gain_pct = (cand.tops_per_watt - base.tops_per_watt) / base.tops_per_watt * 100.0;
    return r;
}

ImprovementReport improvements(const std::vector<RunStats>& stats, const std::string& baseline,
                               const std::string& candidate, const std::string& workload,
                               int batch) {
    return improvements(find_row(stats, baseline, workload, batch),
                        find_row(stats, candidate, workload, batch));
}

std::vector<RealtimeEntry> realtime_table(const std::vector<RunStats>& stats,
                                          const std::string& scenario, double budget_ms) {
    if (!(budget_ms > 0)) throw std::invalid_argument("real-time budget must be > 0");
    std::vector<RealtimeEntry> out;
    for (const auto& r : stats) {
        if (r.scenario != scenario || r.batch != 1) continue;
        out.push_back({r.workload, r.latency_mean, budget_ms, r.latency_mean <= budget_ms});
    }
    if (out.empty()) {
        throw std::out_of_range("no batch-1 rows for scenario '" + scenario + "'");
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.workload < b.workload; });
    return out;
}

}  // namespace chipsim
