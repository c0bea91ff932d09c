#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "mnemosim/core.hpp"
#include "mnemosim/temporal.hpp"

namespace mnemosim {

/// Result of reading a scenario document. Schema problems (wrong types,
/// unknown keys) and invariant violations both land in `report`.
struct LoadedScenario {
  ScenarioConfig config;
  ValidationReport report;
};

LoadedScenario parse_scenario(const nlohmann::json& doc);
LoadedScenario parse_scenario_text(const std::string& text);
LoadedScenario load_scenario_file(const std::filesystem::path& path);

nlohmann::json to_json(const ScenarioConfig& config);

/// Trace document: either a linear trace (`prefix`, optional `period`, `dt`)
/// or a branching one (`branches` mapping id -> {prefix, period}, `dt`).
struct TraceDocument {
  std::optional<Trace> linear;
  std::optional<BranchingTrace> branching;
};

TraceDocument parse_trace(const nlohmann::json& doc);
TraceDocument load_trace_file(const std::filesystem::path& path);

/// Fixed 12-significant-digit rendering used by every text output.
std::string format_double(double value);

/// JSON value of a double rounded to 12 significant digits; "inf"/"-inf"
/// strings for infinities, null for NaN.
nlohmann::json json_number(double value);

}  // namespace mnemosim
