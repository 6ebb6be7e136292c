#pragma once

// Scenario files: a JSON document plus CSV generation traces referenced by
// paths relative to the JSON file.
//
// Trace CSV header is exactly `slot,asset_id,generation_wh`. Every slot of the
// horizon must be present for every asset the scenario reads from the file;
// missing slots are an ingestion error, never zero-filled.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "packetgrid/scenario.hpp"

namespace packetgrid {

struct ScenarioLoad {
  std::optional<Scenario> scenario;  // set only when there are no diagnostics
  std::vector<Diagnostic> diagnostics;
};

/// Reads and checks a scenario file, collecting every problem with its JSON
/// pointer. Throws IoError only when the scenario file itself is unreadable.
ScenarioLoad load_scenario(const std::filesystem::path& path);

/// Same, from JSON text; trace paths resolve against `base_dir`.
ScenarioLoad parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir);

/// Loads or throws ConfigError carrying the first diagnostic.
Scenario load_scenario_or_throw(const std::filesystem::path& path);

/// Canonical JSON with inline traces.
std::string scenario_to_json(const Scenario& scenario);

/// Parses trace CSV text into per-asset series of `horizon_slots` entries.
/// Throws IngestError on a bad header, malformed row, duplicate or missing slot.
std::map<std::string, std::vector<Wh>> parse_trace_csv(std::string_view csv_text, Slot horizon_slots);

std::string trace_csv(const std::vector<GenerationAsset>& assets);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace packetgrid
