#include "chipsim/yield_cost.hpp"

#include <cmath>
#include <numbers>

#include "chipsim/errors.hpp"

namespace chipsim {

void validate(const YieldInput& in) {
    if (!(in.die_area_mm2 >= 0)) throw ValidationError("area", "die area must be >= 0");
    if (!(in.defect_density >= 0)) throw ValidationError("d0", "defect density must be >= 0");
    if (!(in.alpha > 0)) throw ValidationError("alpha", "alpha must be > 0");
}

void validate(const CostInput& in) {
    if (!(in.wafer_cost >= 0)) throw ValidationError("wafer_cost", "wafer_cost must be >= 0");
    if (!(in.wafer_diameter_mm > 0)) {
        throw ValidationError("wafer_diameter", "wafer_diameter must be > 0");
    }
    if (!(in.test_cost_per_die >= 0 && in.packaging_cost >= 0 && in.interposer_cost >= 0 &&
          in.interposer_defect_density >= 0)) {
        throw ValidationError("cost", "costs and interposer defect density must be >= 0");
    }
}

double yield_estimate(const YieldInput& in) {
    const double ad = in.die_area_mm2 / 100.0 * in.defect_density;
    switch (in.model) {
        case YieldModel::poisson:
            return std::exp(-ad);
        case YieldModel::murphy: {
            if (ad < 1e-8) return 1.0 - ad;  // series limit, avoids 0/0
            const double f = -std::expm1(-ad) / ad;
            return f * f;
        }
        case YieldModel::neg_binomial:
            return std::pow(1.0 + ad / in.alpha, -in.alpha);
    }
    return 0.0;
}

long dies_per_wafer(double die_area_mm2, double wafer_diameter_mm) {
    using std::numbers::pi;
    const double radius = wafer_diameter_mm / 2.0;
    const double gross = pi * radius * radius / die_area_mm2 -
                         pi * wafer_diameter_mm / std::sqrt(2.0 * die_area_mm2);
    if (!(gross > 0)) return 0;
    return static_cast<long>(std::floor(gross));
}

std::optional<double> cost_per_good_die(const YieldInput& in, const CostInput& cost) {
    const long dpw = dies_per_wafer(in.die_area_mm2, cost.wafer_diameter_mm);
    const double y = yield_estimate(in);
    if (dpw <= 0 || !(y > 0)) return std::nullopt;
    return cost.wafer_cost / (static_cast<double>(dpw) * y) + cost.test_cost_per_die;
}

namespace {

DieCost cost_die(const std::string& name, const YieldInput& in, const CostInput& cost) {
    DieCost d;
    d.name = name;
    d.area_mm2 = in.die_area_mm2;
    d.yield = yield_estimate(in);
    d.dies_per_wafer = dies_per_wafer(in.die_area_mm2, cost.wafer_diameter_mm);
    const auto c = cost_per_good_die(in, cost);
    if (!c) {
        throw InfeasibleError("die '" + name + "' (" + std::to_string(in.die_area_mm2) +
                              " mm2) yields no good dies per wafer");
    }
    d.cost = *c;
    return d;
}

}  // namespace

CostComparison chiplet_vs_monolithic(const Topology& topology, double monolithic_area_mm2,
                                     const YieldInput& tmpl, const CostInput& cost) {
    validate(tmpl);
    validate(cost);
    CostComparison r;
    for (const auto& chiplet : topology.chiplets) {
        YieldInput in = tmpl;
        in.die_area_mm2 = chiplet.area_mm2();
        r.chiplets.push_back(cost_die(chiplet.name, in, cost));
        r.chiplet_silicon_cost += r.chiplets.back().cost;
    }

    YieldInput interposer = tmpl;
    interposer.die_area_mm2 = topology.interposer_area_mm2();
    interposer.defect_density = cost.interposer_defect_density;
    r.interposer.name = "interposer";
    r.interposer.area_mm2 = interposer.die_area_mm2;
    r.interposer.yield = yield_estimate(interposer);
    r.interposer.dies_per_wafer = dies_per_wafer(interposer.die_area_mm2, cost.wafer_diameter_mm);
    if (!(r.interposer.yield > 0)) throw InfeasibleError("interposer yield is zero");
    r.interposer.cost = cost.interposer_cost / r.interposer.yield;

    r.packaging_cost = cost.packaging_cost;
    r.chiplet_total_cost = r.chiplet_silicon_cost + r.interposer.cost + r.packaging_cost;

    YieldInput mono = tmpl;
    mono.die_area_mm2 = monolithic_area_mm2;
    r.monolithic = cost_die("monolithic", mono, cost);
    r.cost_ratio = r.chiplet_total_cost / r.monolithic.cost;
    r.chiplet_cheaper = r.chiplet_total_cost < r.monolithic.cost;
    return r;
}

YieldInput yield_template(const EconomicsConfig& e) {
    return {0.0, e.defect_density, e.alpha, e.model};
}

CostInput cost_input(const EconomicsConfig& e) {
    return {e.wafer_cost,     e.wafer_diameter_mm, e.test_cost_per_die,
            e.packaging_cost, e.interposer_cost,   e.interposer_defect_density};
}

}  // namespace chipsim
