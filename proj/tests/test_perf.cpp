#include <catch_amalgamated.hpp>

#include <random>

#include "chipsim/model.hpp"
#include "chipsim/perf.hpp"

using namespace chipsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Straight-line reference for the batch-1 latency, written from the raw
// scenario constants rather than through the library types.
struct RefLatency {
    double on_die, comm_total, total;
};

RefLatency reference_batch1(double eff, double link_us, double gbps, double overhead,
                            double overlap, double base_ms, double input_mb) {
    const double on_die = (base_ms + 1.2) * eff;
    const double comm = gbps <= 0 ? 0.0 : 2 * link_us / 1000.0 + input_mb * 8.0 / gbps * overhead;
    return {on_die, comm, on_die + comm * (1.0 - overlap)};
}

ScenarioParams scenario(const char* name) {
    for (auto& s : builtin_scenarios())
        if (s.name == name) return s;
    throw std::logic_error(name);
}

WorkloadModel workload(const char* name) {
    for (auto& w : builtin_workloads())
        if (w.name == name) return w;
    throw std::logic_error(name);
}

}  // namespace

TEST_CASE("transfer_time", "[perf-engine]") {
    CHECK_THAT(transfer_time_ms(0.57, Bandwidth::gbps(16.0), 1.15, 1.0), WithinAbs(0.32775, 1e-12));
    CHECK_THAT(transfer_time_ms(0.30, Bandwidth::gbps(24.0), 1.08, 1.0), WithinAbs(0.108, 1e-12));
    CHECK(transfer_time_ms(123.0, Bandwidth::unbounded(), 3.0, 0.5) == 0.0);
    CHECK_THAT(transfer_time_ms(0.57, Bandwidth::gbps(16.0), 1.15, 0.5), WithinAbs(0.32775 / 2, 1e-12));
}

TEST_CASE("hop_latency", "[perf-engine]") {
    CHECK_THAT(hop_latency_ms(scenario(kBasicChiplet), 2), WithinAbs(0.003, 1e-15));
    CHECK(hop_latency_ms(scenario(kMonolithic), 2) == 0.0);
    CHECK_THAT(hop_latency_ms(scenario(kPoorIntegration), 2), WithinAbs(0.016, 1e-15));
}

TEST_CASE("batch_compute", "[perf-engine]") {
    const auto mn = workload(kMobileNetV2);
    CHECK(batch_compute_ms(mn, 1) == 3.5);
    CHECK_THAT(batch_compute_ms(workload(kResNet50), 2), WithinAbs(22.8, 1e-12));
    // Per-image compute approaches base * e.
    CHECK_THAT(batch_compute_ms(mn, 1'000'000) / 1'000'000, WithinAbs(2.975, 1e-5));
    for (int b = 1; b < 64; ++b) {
        CHECK(batch_compute_ms(mn, b + 1) / (b + 1) <= batch_compute_ms(mn, b) / b);
    }
}

TEST_CASE("amortizing batch model is the reflected reading", "[perf-engine]") {
    const auto mn = workload(kMobileNetV2);
    CHECK(batch_compute_ms(mn, 1, BatchModel::amortizing) == 3.5);
    CHECK_THAT(batch_compute_ms(mn, 1'000'000, BatchModel::amortizing) / 1'000'000,
               WithinAbs(3.5 * 0.15, 1e-5));
}

TEST_CASE("on_die_time", "[perf-engine]") {
    const ModelConstants k;
    const auto mn = workload(kMobileNetV2);
    CHECK_THAT(on_die_time_ms(scenario(kMonolithic), mn, k, 1), WithinAbs(4.700, 1e-12));
    CHECK_THAT(on_die_time_ms(scenario(kBasicChiplet), mn, k, 1), WithinAbs(4.465, 1e-12));
    CHECK_THAT(on_die_time_ms(scenario(kPoorIntegration), mn, k, 1), WithinAbs(5.170, 1e-12));
}

TEST_CASE("latency_point batch 1 against the straight-line reference", "[perf-engine]") {
    const ModelConstants k;
    const auto mn = workload(kMobileNetV2);

    const auto basic = latency_point(scenario(kBasicChiplet), mn, k, 1);
    const auto ref_basic = reference_batch1(0.95, 1.5, 16, 1.15, 0.0, 3.5, 0.57);
    CHECK_THAT(basic.total, WithinAbs(ref_basic.total, 1e-12));
    CHECK_THAT(basic.total, WithinAbs(4.79575, 1e-9));

    const auto ai = latency_point(scenario(kAiOptimized), mn, k, 1);
    const auto ref_ai = reference_batch1(0.90, 0.8, 24, 1.08, 0.6, 3.5, 0.57);
    CHECK_THAT(ai.on_die, WithinAbs(4.230, 1e-12));
    CHECK_THAT(ai.comm_total, WithinAbs(0.2068, 1e-12));
    CHECK_THAT(ai.comm_exposed, WithinAbs(0.2068 * 0.4, 1e-12));
    CHECK_THAT(ai.total, WithinAbs(ref_ai.total, 1e-12));
    CHECK_THAT(ai.total, WithinAbs(4.31272, 1e-9));

    const auto mono = latency_point(scenario(kMonolithic), mn, k, 1);
    CHECK(mono.comm_total == 0.0);
    CHECK(mono.total == mono.on_die);

    const auto poor = latency_point(scenario(kPoorIntegration), mn, k, 1);
    CHECK_THAT(poor.total, WithinAbs(reference_batch1(1.10, 8, 8, 1.25, 0, 3.5, 0.57).total, 1e-12));
    CHECK_THAT(poor.total, WithinAbs(5.8985, 1e-9));
}

TEST_CASE("throughput", "[perf-engine]") {
    CHECK_THAT(throughput(1, 4.1), WithinAbs(243.9, 0.05));
    CHECK(std::lround(throughput(1, 4.1)) == 244);
    CHECK(std::lround(throughput(1, 4.8)) == 208);
    CHECK_THROWS_AS(throughput(1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(throughput(1, -2.0), std::invalid_argument);
}

TEST_CASE("breakdown invariants and monotonicity over random inputs", "[perf-engine][property]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto in = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    const ModelConstants k;

    for (int i = 0; i < 2000; ++i) {
        ScenarioParams s;
        s.name = "random";
        s.link_latency_us = in(0.0, 10.0);
        s.bandwidth = Bandwidth::gbps(in(1.0, 64.0));
        s.base_power_mw = 1000;
        s.efficiency_factor = in(0.5, 1.5);
        s.protocol_overhead = in(1.0, 1.5);
        s.stream_overlap = in(0.0, 1.0);
        s.compression_ratio = in(0.1, 1.0);
        WorkloadModel w{"w", in(0.5, 20.0), in(0.0, 2.0), in(0.2, 1.5), in(0.05, 1.0)};
        const int b = 1 + static_cast<int>(rng() % 32);
        const double factor = in(1.0, 1.5);

        const auto bd = latency_point(s, w, k, b, factor);
        REQUIRE_THAT(bd.total, WithinRel(bd.on_die * bd.throttle_factor + bd.comm_exposed, 1e-15));
        REQUIRE(bd.comm_exposed <= bd.comm_total);
        REQUIRE(bd.total > 0);
        REQUIRE_THAT(throughput(b, bd.total) * bd.total, WithinRel(1000.0 * b, 1e-12));

        auto faster = s;
        faster.bandwidth = Bandwidth::gbps(s.bandwidth.gbps() * in(1.0, 4.0));
        REQUIRE(latency_point(faster, w, k, b, factor).total <= bd.total);

        auto heavier = s;
        heavier.protocol_overhead += in(0.0, 0.5);
        REQUIRE(latency_point(heavier, w, k, b, factor).total >= bd.total);

        auto slower_link = s;
        slower_link.link_latency_us += in(0.0, 5.0);
        REQUIRE(latency_point(slower_link, w, k, b, factor).total >= bd.total);

        auto less_efficient = s;
        less_efficient.efficiency_factor += in(0.0, 0.5);
        REQUIRE(latency_point(less_efficient, w, k, b, factor).total >= bd.total);

        auto less_compressed = s;
        less_compressed.compression_ratio = std::min(1.0, s.compression_ratio + in(0.0, 0.5));
        REQUIRE(latency_point(less_compressed, w, k, b, factor).total >= bd.total);

        const auto bigger = latency_point(s, w, k, b + 1, factor);
        REQUIRE(bigger.total >= bd.total);
        REQUIRE(bigger.total / (b + 1) <= bd.total / b + 1e-12);

        auto hidden = s;
        hidden.stream_overlap = 1.0;
        const auto h = latency_point(hidden, w, k, b, factor);
        REQUIRE(h.total == h.on_die * factor);
        auto exposed = s;
        exposed.stream_overlap = 0.0;
        const auto e = latency_point(exposed, w, k, b, factor);
        REQUIRE(e.comm_exposed == e.comm_total);
    }
}

TEST_CASE("scenario ordering without throttling", "[perf-engine][property]") {
    const ModelConstants k;
    for (const auto& w : builtin_workloads()) {
        for (int b : default_batch_sizes()) {
            const double ai = latency_point(scenario(kAiOptimized), w, k, b).total;
            const double basic = latency_point(scenario(kBasicChiplet), w, k, b).total;
            const double poor = latency_point(scenario(kPoorIntegration), w, k, b).total;
            CHECK(ai <= basic);
            CHECK(basic <= poor);
        }
    }
}
