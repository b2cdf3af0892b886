// chipsim: command-line front end for the chiplet SoC simulator.
//
// Exit codes: 0 success, 1 usage, 2 validation/config, 3 convergence,
// 4 I/O, 5 infeasible cost comparison.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "chipsim/config.hpp"
#include "chipsim/errors.hpp"
#include "chipsim/harness.hpp"
#include "chipsim/model.hpp"
#include "chipsim/power_thermal.hpp"
#include "chipsim/report.hpp"
#include "chipsim/yield_cost.hpp"

namespace {

using namespace chipsim;

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kConvergence = 3, kIo = 4, kInfeasible = 5 };

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> samples;
    std::optional<double> noise;
    unsigned jobs = 0;
    std::string out;
    std::string format = "tabular";
};

SimConfig load(const CommonOptions& opts) {
    SimConfig config = opts.config_path.empty() ? default_config() : load_config(opts.config_path);
    if (opts.seed) config.seed = *opts.seed;
    if (opts.samples) config.samples_per_point = *opts.samples;
    if (opts.noise) config.noise_sigma = *opts.noise;
    validate(config);
    return config;
}

OutputFormat output_format(const std::string& name) {
    return name == "structured" ? OutputFormat::structured : OutputFormat::tabular;
}

void emit(const std::string& out, std::string_view text) {
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_file(out, text);
    }
}

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_output) {
    cmd->add_option("--config", opts.config_path, "Config file (defaults to the built-in setup)");
    cmd->add_option("--seed", opts.seed, "Override the run seed");
    cmd->add_option("--samples", opts.samples, "Override samples per grid point");
    cmd->add_option("--noise", opts.noise, "Override relative on-die noise sigma");
    cmd->add_option("--jobs", opts.jobs, "Worker threads (0 = all cores)");
    if (with_output) {
        cmd->add_option("--out", opts.out, "Output path ('-' or empty for stdout)");
        cmd->add_option("--format", opts.format, "tabular (CSV) or structured (JSON)")
            ->check(CLI::IsMember({"tabular", "structured"}));
    }
}

void report_nonconverged(const std::vector<RunStats>& stats) {
    for (const auto& r : stats) {
        if (r.nonconverged > 0) {
            std::cerr << "warning: " << r.nonconverged << " sample(s) did not converge for "
                      << r.scenario << " / " << r.workload << " / batch " << r.batch << "\n";
        }
    }
}

std::string improvement_text(const ImprovementReport& imp) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(1);
    os << imp.candidate << " vs " << imp.baseline << " (" << imp.workload << ", batch " << imp.batch
       << ")\n";
    os << "  latency reduction   " << std::setw(6) << imp.latency_reduction_pct << " %\n";
    os << "  throughput gain     " << std::setw(6) << imp.throughput_gain_pct << " %\n";
    os << "  power reduction     " << std::setw(6) << imp.power_reduction_pct << " %\n";
    os << "  TOPS/W gain         " << std::setw(6) << imp.efficiency_gain_pct << " %\n";
    return os.str();
}

nlohmann::json comparison_json(const CostComparison& c) {
    const auto die = [](const DieCost& d) {
        return nlohmann::json{{"name", d.name},       {"area_mm2", d.area_mm2},
                              {"yield", d.yield},     {"dies_per_wafer", d.dies_per_wafer},
                              {"cost", d.cost}};
    };
    nlohmann::json chiplets = nlohmann::json::array();
    for (const auto& d : c.chiplets) chiplets.push_back(die(d));
    return {{"schema_version", 1},
            {"kind", "chipsim.cost_compare"},
            {"chiplets", chiplets},
            {"interposer", die(c.interposer)},
            {"chiplet_silicon_cost", c.chiplet_silicon_cost},
            {"packaging_cost", c.packaging_cost},
            {"chiplet_total_cost", c.chiplet_total_cost},
            {"monolithic", die(c.monolithic)},
            {"cost_ratio", c.cost_ratio},
            {"chiplet_cheaper", c.chiplet_cheaper}};
}

std::string comparison_text(const CostComparison& c) {
    std::ostringstream os;
    os << std::fixed;
    os << std::left << std::setw(14) << "die" << std::right << std::setw(10) << "area_mm2"
       << std::setw(8) << "yield" << std::setw(8) << "dpw" << std::setw(12) << "cost" << "\n";
    const auto line = [&](const DieCost& d) {
        os << std::left << std::setw(14) << d.name << std::right << std::setprecision(1)
           << std::setw(10) << d.area_mm2 << std::setprecision(3) << std::setw(8) << d.yield
           << std::setw(8) << d.dies_per_wafer << std::setprecision(2) << std::setw(12) << d.cost
           << "\n";
    };
    for (const auto& d : c.chiplets) line(d);
    line(c.interposer);
    os << std::setprecision(2);
    os << "chiplet silicon " << c.chiplet_silicon_cost << ", packaging " << c.packaging_cost
       << ", total " << c.chiplet_total_cost << "\n";
    line(c.monolithic);
    os << "chiplet/monolithic cost ratio " << std::setprecision(3) << c.cost_ratio << " ("
       << (c.chiplet_cheaper ? "chiplet cheaper" : "monolithic cheaper") << ")\n";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chiplet edge-AI SoC design-space simulator"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    auto* run = app.add_subcommand("run", "Run the scenario x workload x batch grid");
    add_common(run, run_opts, true);

    CommonOptions sweep_opts;
    std::vector<int> sweep_batches;
    std::vector<std::string> sweep_scenarios, sweep_workloads;
    auto* sweep = app.add_subcommand("sweep", "Run the grid over an explicit batch list");
    add_common(sweep, sweep_opts, true);
    sweep->add_option("--batches", sweep_batches, "Batch sizes, e.g. 1,2,4,8")->delimiter(',')->required();
    sweep->add_option("--scenarios", sweep_scenarios, "Restrict to these scenarios")->delimiter(',');
    sweep->add_option("--workloads", sweep_workloads, "Restrict to these workloads")->delimiter(',');

    CommonOptions cmp_opts;
    std::string baseline = kBasicChiplet, candidate = kAiOptimized, cmp_workload = kMobileNetV2;
    int cmp_batch = 1;
    auto* compare = app.add_subcommand("compare", "Percentage improvement of one scenario over another");
    add_common(compare, cmp_opts, false);
    compare->add_option("--baseline", baseline, "Baseline scenario");
    compare->add_option("--candidate", candidate, "Candidate scenario");
    compare->add_option("--workload", cmp_workload, "Workload");
    compare->add_option("--batch", cmp_batch, "Batch size");

    CommonOptions rt_opts;
    std::string rt_scenario = kAiOptimized;
    std::optional<double> rt_budget;
    auto* realtime = app.add_subcommand("realtime", "Batch-1 real-time pass/fail per workload");
    add_common(realtime, rt_opts, false);
    realtime->add_option("--scenario", rt_scenario, "Scenario to check");
    realtime->add_option("--budget", rt_budget, "Latency budget in ms (default from config)");

    CommonOptions plot_opts;
    std::string plot_dir;
    auto* plotdata = app.add_subcommand("plotdata", "Write plot-ready series for the result panels");
    add_common(plotdata, plot_opts, false);
    plotdata->add_option("--out", plot_dir, "Output directory")->required();

    double area = 0, d0 = 0, alpha = 3.0;
    std::string yield_model = "poisson", yield_format = "tabular";
    auto* yield = app.add_subcommand("yield", "Defect-limited die yield");
    yield->add_option("--area", area, "Die area in mm^2")->required();
    yield->add_option("--d0", d0, "Defect density per cm^2")->required();
    yield->add_option("--model", yield_model)->check(CLI::IsMember({"poisson", "murphy", "negbin"}));
    yield->add_option("--alpha", alpha, "Negative-binomial clustering parameter");
    yield->add_option("--format", yield_format)->check(CLI::IsMember({"tabular", "structured"}));

    std::string cost_config, cost_format = "tabular";
    auto* cost = app.add_subcommand("cost-compare", "Chiplet vs monolithic cost per good system");
    cost->add_option("--config", cost_config, "Config file (defaults to the built-in setup)");
    cost->add_option("--format", cost_format)->check(CLI::IsMember({"tabular", "structured"}));

    std::string fp_config;
    auto* floorplan = app.add_subcommand("floorplan", "Check die area against the interposer budget");
    floorplan->add_option("--config", fp_config, "Config file");

    auto* defaults = app.add_subcommand("print-defaults", "Print the full built-in config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run) {
            const auto config = load(run_opts);
            const auto stats = run_grid(config, run_opts.jobs);
            report_nonconverged(stats);
            emit(run_opts.out, emit_results(stats, output_format(run_opts.format)));
        } else if (*sweep) {
            auto config = load(sweep_opts);
            config.batch_sizes = sweep_batches;
            if (!sweep_scenarios.empty()) {
                std::erase_if(config.scenarios, [&](const ScenarioParams& s) {
                    return std::find(sweep_scenarios.begin(), sweep_scenarios.end(), s.name) ==
                           sweep_scenarios.end();
                });
            }
            if (!sweep_workloads.empty()) {
                std::erase_if(config.workloads, [&](const WorkloadModel& w) {
                    return std::find(sweep_workloads.begin(), sweep_workloads.end(), w.name) ==
                           sweep_workloads.end();
                });
            }
            validate(config);
            const auto stats = run_grid(config, sweep_opts.jobs);
            report_nonconverged(stats);
            emit(sweep_opts.out, emit_results(stats, output_format(sweep_opts.format)));
        } else if (*compare) {
            auto config = load(cmp_opts);
            config.batch_sizes = {cmp_batch};
            const auto stats = run_grid(config, cmp_opts.jobs);
            std::cout << improvement_text(improvements(stats, baseline, candidate, cmp_workload, cmp_batch));
        } else if (*realtime) {
            auto config = load(rt_opts);
            config.batch_sizes = {1};
            const auto stats = run_grid(config, rt_opts.jobs);
            const double budget = rt_budget.value_or(config.realtime_budget_ms);
            std::cout << std::fixed << std::setprecision(3);
            for (const auto& e : realtime_table(stats, rt_scenario, budget)) {
                std::cout << std::left << std::setw(20) << e.workload << std::right << std::setw(10)
                          << e.latency_ms << " ms  " << (e.pass ? "pass" : "FAIL") << "\n";
            }
        } else if (*plotdata) {
            const auto config = load(plot_opts);
            const auto stats = run_grid(config, plot_opts.jobs);
            report_nonconverged(stats);
            const std::filesystem::path dir(plot_dir);
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
            PlotSelection sel;
            sel.realtime_budget_ms = config.realtime_budget_ms;
            write_file(dir / "plotdata.json", emit_plotdata(stats, sel));
            write_file(dir / "results.json", emit_results(stats, OutputFormat::structured));
            std::cout << "wrote " << (dir / "plotdata.json").string() << " and "
                      << (dir / "results.json").string() << "\n";
        } else if (*yield) {
            YieldInput in{area, d0, alpha, *parse_yield_model(yield_model)};
            validate(in);
            const double y = yield_estimate(in);
            if (yield_format == "structured") {
                nlohmann::json j{{"schema_version", 1}, {"kind", "chipsim.yield"},
                                 {"area_mm2", area},    {"defect_density", d0},
                                 {"model", yield_model}, {"alpha", alpha},
                                 {"yield", y}};
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "model " << yield_model << ", area " << area << " mm2, D0 " << d0
                          << "/cm2 -> yield " << std::fixed << std::setprecision(4) << y << "\n";
            }
        } else if (*cost) {
            const auto config = cost_config.empty() ? default_config() : load_config(cost_config);
            const auto& e = config.economics;
            const auto cmp = chiplet_vs_monolithic(config.topology, e.monolithic_area_mm2,
                                                   yield_template(e), cost_input(e));
            if (cost_format == "structured") {
                std::cout << comparison_json(cmp).dump(2) << "\n";
            } else {
                std::cout << comparison_text(cmp);
            }
        } else if (*floorplan) {
            const auto config = fp_config.empty() ? default_config() : load_config(fp_config);
            const auto report = floorplan_check(config.topology);
            std::cout << report.describe() << "\n";
            return report.pass ? kOk : kValidation;
        } else if (*defaults) {
            std::cout << render_config(default_config());
        }
    } catch (const ConfigSyntaxError& e) {
        std::cerr << "error[config]: " << e.what() << "\n";
        return kValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error[validation]: " << e.field() << ": " << e.what() << "\n";
        return kValidation;
    } catch (const GridError& e) {
        std::cerr << "error[convergence]: " << e.what() << "\n";
        return kConvergence;
    } catch (const ConvergenceError& e) {
        std::cerr << "error[convergence]: " << e.what() << "\n";
        return kConvergence;
    } catch (const IoError& e) {
        std::cerr << "error[io]: " << e.what() << "\n";
        return kIo;
    } catch (const InfeasibleError& e) {
        std::cerr << "error[infeasible]: " << e.what() << "\n";
        return kInfeasible;
    } catch (const std::out_of_range& e) {
        std::cerr << "error[validation]: " << e.what() << "\n";
        return kValidation;
    }
    return kOk;
}
