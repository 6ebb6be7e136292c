#pragma once

// Slot-synchronous simulation loop. Each one-minute slot:
//   hems requests (at day start) -> per-microgrid planning and announcement
//   -> hyper-server match and settlement -> per-microgrid final allocation,
//   storage dispatch and ledger close.
// Randomness is confined to demand generation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "packetgrid/hyper_server.hpp"
#include "packetgrid/metrics.hpp"
#include "packetgrid/scenario.hpp"

namespace packetgrid {

struct RunConfig {
  std::string scenario_name;
  Mode mode = Mode::Commons;
  std::uint64_t seed = 0;
  Slot horizon_slots = 0;
  Slot slots_per_day = 0;
  Wh packet_size_wh = 0;
  Rational network_cost_multiplier;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct RunResult {
  RunConfig config;
  std::vector<MicrogridRun> microgrids;
  std::vector<Transfer> transfers;
  std::vector<LinkUsage> link_audit;
  ReciprocityLedger reciprocity;
  Metrics metrics;
};

/// Runs the scenario in its configured mode. Throws ConfigError when the
/// scenario does not validate and InvariantFailure (with slot context) when a
/// run-time invariant breaks.
RunResult run(const Scenario& scenario, std::optional<std::uint64_t> seed_override = std::nullopt);

/// Baseline: requests served only at their desired start (no deferral),
/// greedy storage, no inter-microgrid transfers.
RunResult run_uncoordinated(const Scenario& scenario, std::optional<std::uint64_t> seed_override = std::nullopt);

/// The request as the uncoordinated baseline sees it: an interruptible request
/// must be served in its start slot, an uninterruptible one must start then.
PacketRequest without_deferral(PacketRequest r);

/// Horizon-level closed-system identity:
///   generation == consumption + storage delta + curtailment + link losses.
bool community_conserved(const RunResult& result);

}  // namespace packetgrid
