#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chipsim/model.hpp"

namespace chipsim {

struct YieldInput {
    double die_area_mm2 = 0.0;
    double defect_density = 0.0;  // defects per cm^2
    double alpha = 3.0;           // clustering, negative binomial only
    YieldModel model = YieldModel::poisson;
};

struct CostInput {
    double wafer_cost = 0.0;
    double wafer_diameter_mm = 300.0;
    double test_cost_per_die = 0.0;
    double packaging_cost = 0.0;
    double interposer_cost = 0.0;
    double interposer_defect_density = 0.05;
};

void validate(const YieldInput& input);
void validate(const CostInput& input);

double yield_estimate(const YieldInput& input);

// Gross dies on a round wafer with the usual edge-loss correction.
long dies_per_wafer(double die_area_mm2, double wafer_diameter_mm);

// nullopt when no good die can be produced (die larger than the wafer, or
// zero yield).
std::optional<double> cost_per_good_die(const YieldInput& input, const CostInput& cost);

struct DieCost {
    std::string name;
    double area_mm2 = 0.0;
    double yield = 0.0;
    long dies_per_wafer = 0;
    double cost = 0.0;  // per known-good die, including test
};

struct CostComparison {
    std::vector<DieCost> chiplets;
    DieCost interposer;
    double chiplet_silicon_cost = 0.0;
    double packaging_cost = 0.0;
    double chiplet_total_cost = 0.0;  // silicon + interposer + packaging
    DieCost monolithic;
    double cost_ratio = 0.0;  // chiplet_total / monolithic
    bool chiplet_cheaper = false;
};

class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Known-good-die comparison: each chiplet is tested before assembly, so its
// cost is wafer cost over good dies plus test. The interposer is a passive
// die with its own defect density. Throws InfeasibleError if any die cannot
// be produced.
CostComparison chiplet_vs_monolithic(const Topology& topology, double monolithic_area_mm2,
                                     const YieldInput& yield_template, const CostInput& cost);

YieldInput yield_template(const EconomicsConfig& economics);
CostInput cost_input(const EconomicsConfig& economics);

}  // namespace chipsim
