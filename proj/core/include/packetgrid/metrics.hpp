#pragma once

#include <span>
#include <string>
#include <vector>

#include "packetgrid/energy_server.hpp"
#include "packetgrid/hyper_server.hpp"
#include "packetgrid/rational.hpp"
#include "packetgrid/scheduler.hpp"

namespace packetgrid {

/// Everything one microgrid recorded during a run.
struct MicrogridRun {
  std::string microgrid_id;
  std::vector<PacketRequest> requests;
  std::vector<GrantRecord> grants;
  std::vector<Denial> denials;
  std::vector<SlotLedger> ledgers;
  Wh initial_soc_wh = 0;
  Wh final_soc_wh = 0;

  friend bool operator==(const MicrogridRun&, const MicrogridRun&) = default;
};

struct MicrogridMetrics {
  std::string microgrid_id;
  double self_sufficiency = 1.0;
  Wh generation_wh = 0;
  Wh consumption_wh = 0;
  Wh imports_wh = 0;
  Wh exports_wh = 0;
  Wh curtailment_wh = 0;
  Wh unserved_energy_wh = 0;
  std::int64_t requested_packets = 0;
  std::int64_t denied_packets = 0;
  double packet_blocking_rate = 0.0;
  double import_share = 0.0;
  double fairness = 1.0;  // Jain index over household served fractions
  double network_cost_proxy = 0.0;
};

struct Metrics {
  std::vector<MicrogridMetrics> microgrids;
  // Community totals. Transfers between member microgrids are internal, so
  // community self-sufficiency only counts external imports (none here).
  MicrogridMetrics community;
  Wh link_losses_wh = 0;
};

/// (sum x)^2 / (n * sum x^2); 1 for an empty set or all-zero values.
double jain_index(std::span<const double> values);

/// Recomputes all metrics from ledgers, grants, requests and denials.
Metrics compute_metrics(std::span<const MicrogridRun> runs, std::span<const Transfer> transfers,
                        Wh packet_size_wh, const Rational& network_cost_multiplier);

}  // namespace packetgrid
