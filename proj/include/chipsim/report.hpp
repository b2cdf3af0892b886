#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chipsim/harness.hpp"

namespace chipsim {

inline constexpr int kResultsSchemaVersion = 1;
inline constexpr int kPlotDataSchemaVersion = 1;

enum class OutputFormat { tabular, structured };

// Tabular output is CSV. Columns: scenario, workload, batch, latency_mean,
// latency_std, throughput, power, tops_per_watt, energy, realtime, then
// samples, nonconverged, seed. Numbers use the shortest round-trip form.
std::string emit_results(const std::vector<RunStats>& stats, OutputFormat format);

// Inverse of emit_results for either format. Throws std::runtime_error on
// malformed input or an unsupported schema_version.
std::vector<RunStats> parse_results(std::string_view text, OutputFormat format);

class PlotDataError : public std::runtime_error {
public:
    PlotDataError(const std::string& what, std::vector<std::string> missing)
        : std::runtime_error(what), missing(std::move(missing)) {}
    std::vector<std::string> missing;  // "panel (x): <row>"
};

struct PlotSelection {
    std::string workload = "MobileNetV2";
    std::string baseline = "Basic Chiplet";
    std::string candidate = "AI-Optimized Chiplet";
    double realtime_budget_ms = 5.0;
};

// Six panels keyed "a".."f"; every series lists the result rows it came from.
std::string emit_plotdata(const std::vector<RunStats>& stats, const PlotSelection& selection);

// Writes `text` to `path`, throwing IoError with the path on failure.
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace chipsim
