#pragma once

// Multi-seed batch runs with paired Commons vs Uncoordinated comparison.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "packetgrid/scenario.hpp"

namespace packetgrid {

struct SeedRange {
  std::uint64_t first = 0;
  std::uint64_t last = 0;  // inclusive
};

/// Parses "a..b" (inclusive). Throws ConfigError when malformed or empty (b < a).
SeedRange parse_seed_range(std::string_view text);

/// "commons", "uncoordinated" or "both".
std::vector<Mode> parse_modes(std::string_view text);

struct SweepRow {
  std::uint64_t seed = 0;
  Mode mode = Mode::Commons;
  bool ok = false;
  std::string error;  // set when the run failed
  double self_sufficiency = 0.0;            // community
  double microgrid_self_sufficiency = 0.0;  // consumption-weighted over microgrids
  Wh unserved_wh = 0;
  double blocking_rate = 0.0;
  Wh imports_wh = 0;
  Wh link_losses_wh = 0;
  double fairness = 0.0;
  double network_cost_proxy = 0.0;
  // Commons minus Uncoordinated for the same seed, when both runs succeeded.
  std::optional<Wh> diff_unserved_wh;
  std::optional<double> diff_microgrid_self_sufficiency;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // seed ascending, then the requested mode order

  std::size_t failures() const;
};

/// Runs every (seed, mode) pair, up to `jobs` at a time. A failing run is
/// recorded in its row and the sweep carries on.
SweepResult run_sweep(const Scenario& scenario, SeedRange seeds, const std::vector<Mode>& modes,
                      unsigned jobs = 1);

std::string sweep_csv(const SweepResult& result);

/// Means of the headline metrics per mode and of the paired differences.
std::string sweep_summary(const SweepResult& result);

}  // namespace packetgrid
