#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "chipsim/model.hpp"

namespace chipsim {

// Config documents are line oriented:
//
//   # comment
//   [run]
//   seed = 7
//   scenarios = Basic Chiplet, AI-Optimized Chiplet
//   [scenario.AI-Optimized Chiplet]
//   stream_overlap = 0.5
//
// Sections: [run], [constants], [topology], [economics], [scenario.<name>],
// [workload.<name>], [chiplet.<name>]. Anything not mentioned keeps its
// built-in value. A named section whose name matches a built-in entry
// overrides individual fields; a new name must set every required field.
// The optional selection lists `run.scenarios`, `run.workloads` and
// `topology.chiplets` choose which entries are active.
//
// Throws ConfigSyntaxError for malformed text and unknown keys, and
// ValidationError when the resulting config breaks an invariant.
SimConfig parse_config(std::string_view text);

SimConfig load_config(const std::filesystem::path& path);

// Serializes every field; parse_config(render_config(c)) == c.
std::string render_config(const SimConfig& config);

}  // namespace chipsim
