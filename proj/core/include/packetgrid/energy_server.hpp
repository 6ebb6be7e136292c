#pragma once

// The per-microgrid coordinator. Each slot it plans against local generation
// and storage, announces its residual deficit or surplus, and after the
// inter-microgrid settlement books an exact conservation ledger.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "packetgrid/hems.hpp"
#include "packetgrid/pem.hpp"
#include "packetgrid/rational.hpp"
#include "packetgrid/scheduler.hpp"

namespace packetgrid {

struct StorageUnit {
  std::string storage_id;
  Wh capacity_wh = 0;
  Wh soc_wh = 0;
  Wh max_charge_wh_per_slot = 0;     // bus-side input
  Wh max_discharge_wh_per_slot = 0;
  Rational round_trip_efficiency = Rational(1, 1);  // applied on charge
};

struct GenerationAsset {
  std::string asset_id;
  std::vector<Wh> trace;  // one entry per slot of the horizon
};

// generation + storage_discharge + imports
//   == consumption + storage_charge + exports + curtailment
// storage_charge is the energy that reached the cells; charging losses are
// curtailment. Link losses are informational here and closed on the link.
struct SlotLedger {
  Slot slot = 0;
  Wh generation_wh = 0;
  Wh storage_discharge_wh = 0;
  Wh imports_wh = 0;
  Wh consumption_wh = 0;
  Wh storage_charge_wh = 0;
  Wh exports_wh = 0;
  Wh curtailment_wh = 0;
  Wh link_losses_attributed_wh = 0;

  bool balanced() const {
    return generation_wh + storage_discharge_wh + imports_wh ==
           consumption_wh + storage_charge_wh + exports_wh + curtailment_wh;
  }
  friend bool operator==(const SlotLedger&, const SlotLedger&) = default;
};

struct Announcement {
  std::string microgrid_id;
  Slot slot = 0;
  Wh deficit_wh = 0;
  Wh surplus_wh = 0;

  friend bool operator==(const Announcement&, const Announcement&) = default;
};

struct SupplyBreakdown {
  Wh generation_wh = 0;
  Wh storage_discharge_headroom_wh = 0;

  Wh total() const { return generation_wh + storage_discharge_headroom_wh; }
  friend bool operator==(const SupplyBreakdown&, const SupplyBreakdown&) = default;
};

struct StorageAction {
  Wh charge_input_wh = 0;   // taken from the bus
  Wh stored_wh = 0;         // added to state of charge
  Wh discharge_wh = 0;
  Wh curtailment_wh = 0;    // surplus neither stored nor used, incl. charge losses
  Wh residual_deficit_wh = 0;
};

// Working state of the current slot between planning and settlement.
struct SlotPlan {
  Slot slot = -1;
  SupplyBreakdown supply;
  std::int64_t wanted_packets = 0;
  Announcement announcement;
};

struct MicrogridState {
  std::string microgrid_id;
  Wh packet_size_wh = kDefaultPacketSizeWh;
  std::vector<HouseholdProfile> households;
  std::vector<GenerationAsset> generation;
  std::vector<StorageUnit> storage;

  std::vector<PacketRequest> upcoming;     // not yet arrived, sorted by arrival
  std::size_t next_upcoming = 0;
  std::vector<QueuedRequest> pending;      // arrived, unfinished

  std::vector<PacketRequest> requests;     // every request ever enqueued
  std::vector<GrantRecord> grants;
  std::vector<Denial> denials;
  std::vector<SlotLedger> ledgers;

  SlotPlan plan;
};

/// Generation from traces plus sum over units of min(soc, max discharge).
SupplyBreakdown available_supply(const MicrogridState& state, Slot slot);

/// Energy the units can absorb this slot from the bus, optionally only up to a
/// combined state-of-charge target (filled in unit order).
Wh storage_charge_limit(std::span<const StorageUnit> units, std::optional<Wh> soc_target = std::nullopt);

/// Applies a slot's net position to storage: a surplus charges (losses and any
/// excess become curtailment); a deficit discharges up to the headroom. Never
/// charges and discharges in the same call.
StorageAction dispatch_storage(MicrogridState& state, Slot slot, Wh net_position_wh,
                               std::optional<Wh> soc_target = std::nullopt);

/// State-of-charge target from the forecast demand over the next
/// `lookahead_slots`; nullopt when the forecast has no history yet.
std::optional<Wh> storage_reserve_target(const MicrogridState& state, const Forecast& forecast, Slot slot,
                                         Slot slots_per_day, Slot lookahead_slots);

/// Admits arrivals up to `slot`, plans against local supply and fills
/// `state.plan`. Returns the announcement.
Announcement begin_slot(MicrogridState& state, Slot slot, std::optional<Wh> soc_target = std::nullopt);

/// The announcement of the planned slot.
Announcement compute_announcement(const MicrogridState& state, Slot slot);

/// Final allocation with settled transfers, storage dispatch and ledger close.
/// Throws ProtocolViolation if settlement exceeds the announcement and
/// InvariantFailure if the books do not balance.
SlotLedger apply_transfers(MicrogridState& state, Slot slot, Wh incoming_wh, Wh outgoing_wh,
                           Wh link_losses_wh = 0);

/// Adds requests to the arrival queue; they must arrive no earlier than the
/// next slot to be planned.
void enqueue_requests(MicrogridState& state, std::vector<PacketRequest> requests);

/// (sum consumption - sum imports) / sum consumption; 1 when nothing was consumed.
double self_sufficiency(std::span<const SlotLedger> ledgers);

}  // namespace packetgrid
