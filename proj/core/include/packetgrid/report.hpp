#pragma once

// Serialized run outputs. Every function here is a pure function of the
// RunResult, so identical runs give identical bytes.

#include <filesystem>
#include <string>

#include "packetgrid/engine.hpp"

namespace packetgrid {

inline constexpr int kReportSchemaVersion = 1;

/// Fixed six-decimal rendering used by every text output.
std::string format_ratio(double value);

/// Config echo, metrics, reciprocity ledger, link audit totals.
std::string run_json(const RunResult& result);

/// One row per (slot, microgrid):
/// slot,microgrid_id,generation_wh,consumption_wh,imports_wh,exports_wh,
/// curtailment_wh,soc_wh,unserved_wh,self_sufficiency_cumulative
std::string metrics_csv(const RunResult& result);

/// The raw slot ledgers, one row per (slot, microgrid).
std::string ledger_csv(const RunResult& result);

/// slot,from,to,sent_wh,received_wh,loss_wh
std::string transfers_csv(const RunResult& result);

/// self_sufficiency=... unserved_wh=... blocking_rate=... (community level)
std::string summary_line(const RunResult& result);

/// Human-readable multi-line summary with a per-microgrid table.
std::string summary_text(const RunResult& result);

/// Writes run.json, metrics.csv, transfers.csv, ledger.csv and summary.txt
/// into `dir`, creating it if needed. On failure removes whatever it wrote
/// and throws IoError.
void write_report_bundle(const RunResult& result, const std::filesystem::path& dir);

}  // namespace packetgrid
