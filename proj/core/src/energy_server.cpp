#include "packetgrid/energy_server.hpp"

#include <algorithm>

#include "packetgrid/errors.hpp"

namespace packetgrid {

namespace {

// Bus-side input that fills `head_wh` of cell headroom at the given efficiency.
Wh input_for_headroom(Wh head_wh, const Rational& efficiency) {
  if (head_wh <= 0) return 0;
  return Rational(efficiency.den(), efficiency.num()).mul_ceil(head_wh);
}

std::vector<Wh> unit_targets(std::span<const StorageUnit> units, std::optional<Wh> soc_target) {
  std::vector<Wh> targets;
  targets.reserve(units.size());
  Wh left = soc_target.value_or(0);
  for (const auto& u : units) {
    if (!soc_target) {
      targets.push_back(u.capacity_wh);
    } else {
      const Wh t = std::clamp<Wh>(left, 0, u.capacity_wh);
      targets.push_back(t);
      left -= t;
    }
  }
  return targets;
}

std::vector<QueuedRequest> active_queue(const MicrogridState& state, Slot slot) {
  std::vector<QueuedRequest> active;
  active.reserve(state.pending.size());
  for (const auto& q : state.pending) {
    if (q.earliest_start <= slot) active.push_back(q);
  }
  return active;
}

std::string where(const MicrogridState& state, Slot slot) {
  return "microgrid " + state.microgrid_id + ", slot " + std::to_string(slot) + ": ";
}

}  // namespace

SupplyBreakdown available_supply(const MicrogridState& state, Slot slot) {
  SupplyBreakdown s;
  for (const auto& g : state.generation) {
    if (slot < 0 || static_cast<std::size_t>(slot) >= g.trace.size()) {
      throw InvariantFailure(where(state, slot) + "asset " + g.asset_id + " has no trace value");
    }
    s.generation_wh += g.trace[static_cast<std::size_t>(slot)];
  }
  for (const auto& u : state.storage) {
    s.storage_discharge_headroom_wh += std::min(u.soc_wh, u.max_discharge_wh_per_slot);
  }
  return s;
}

Wh storage_charge_limit(std::span<const StorageUnit> units, std::optional<Wh> soc_target) {
  const auto targets = unit_targets(units, soc_target);
  Wh limit = 0;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const auto& u = units[i];
    limit += std::min(u.max_charge_wh_per_slot, input_for_headroom(targets[i] - u.soc_wh, u.round_trip_efficiency));
  }
  return limit;
}

StorageAction dispatch_storage(MicrogridState& state, Slot slot, Wh net_position_wh, std::optional<Wh> soc_target) {
  StorageAction act;
  if (net_position_wh > 0) {
    const auto targets = unit_targets(state.storage, soc_target);
    Wh left = net_position_wh;
    for (std::size_t i = 0; i < state.storage.size() && left > 0; ++i) {
      auto& u = state.storage[i];
      const Wh head = targets[i] - u.soc_wh;
      const Wh x = std::min({left, u.max_charge_wh_per_slot, input_for_headroom(head, u.round_trip_efficiency)});
      if (x <= 0) continue;
      const Wh stored = std::min(u.round_trip_efficiency.mul_floor(x), head);
      u.soc_wh += stored;
      left -= x;
      act.charge_input_wh += x;
      act.stored_wh += stored;
    }
    act.curtailment_wh = net_position_wh - act.stored_wh;
  } else if (net_position_wh < 0) {
    Wh need = -net_position_wh;
    for (auto& u : state.storage) {
      const Wh d = std::min({need, u.soc_wh, u.max_discharge_wh_per_slot});
      u.soc_wh -= d;
      need -= d;
      act.discharge_wh += d;
    }
    act.residual_deficit_wh = need;
  }
  for (const auto& u : state.storage) {
    if (u.soc_wh < 0 || u.soc_wh > u.capacity_wh) {
      throw InvariantFailure(where(state, slot) + "storage " + u.storage_id + " out of bounds");
    }
  }
  return act;
}

std::optional<Wh> storage_reserve_target(const MicrogridState& state, const Forecast& forecast, Slot slot,
                                         Slot slots_per_day, Slot lookahead_slots) {
  (void)state;
  if (forecast.history_days_used == 0 || forecast.per_slot_wh.empty() || slots_per_day <= 0) return std::nullopt;
  Wh sum = 0;
  const auto n = static_cast<Slot>(forecast.per_slot_wh.size());
  for (Slot k = 1; k <= lookahead_slots; ++k) {
    sum += forecast.per_slot_wh[static_cast<std::size_t>(((slot + k) % slots_per_day) % n)];
  }
  return sum;
}

void enqueue_requests(MicrogridState& state, std::vector<PacketRequest> requests) {
  std::stable_sort(requests.begin(), requests.end(),
                   [](const PacketRequest& a, const PacketRequest& b) { return a.arrival_slot < b.arrival_slot; });
  // Drop what has already been admitted to keep the vector bounded.
  state.upcoming.erase(state.upcoming.begin(),
                       state.upcoming.begin() + static_cast<std::ptrdiff_t>(state.next_upcoming));
  state.next_upcoming = 0;
  const auto mid = state.upcoming.size();
  for (auto& r : requests) state.upcoming.push_back(std::move(r));
  std::inplace_merge(state.upcoming.begin(), state.upcoming.begin() + static_cast<std::ptrdiff_t>(mid),
                     state.upcoming.end(),
                     [](const PacketRequest& a, const PacketRequest& b) { return a.arrival_slot < b.arrival_slot; });
}

Announcement begin_slot(MicrogridState& state, Slot slot, std::optional<Wh> soc_target) {
  while (state.next_upcoming < state.upcoming.size() && state.upcoming[state.next_upcoming].arrival_slot <= slot) {
    const auto& r = state.upcoming[state.next_upcoming++];
    state.pending.push_back(QueuedRequest::from(r));
    state.requests.push_back(r);
  }

  SlotPlan& plan = state.plan;
  plan.slot = slot;
  plan.supply = available_supply(state, slot);
  plan.wanted_packets = wanted_packets(active_queue(state, slot), slot);

  const Wh local = plan.supply.total();
  const Wh wanted_wh = plan.wanted_packets * state.packet_size_wh;
  Announcement a{state.microgrid_id, slot, 0, 0};
  if (wanted_wh > local) {
    a.deficit_wh = wanted_wh - local;
  } else {
    const Wh net = plan.supply.generation_wh - wanted_wh;
    if (net > 0) a.surplus_wh = net - std::min(net, storage_charge_limit(state.storage, soc_target));
  }
  plan.announcement = a;
  return a;
}

Announcement compute_announcement(const MicrogridState& state, Slot slot) {
  if (state.plan.slot != slot) {
    throw ProtocolViolation(where(state, slot) + "announcement requested before planning");
  }
  return state.plan.announcement;
}

SlotLedger apply_transfers(MicrogridState& state, Slot slot, Wh incoming_wh, Wh outgoing_wh, Wh link_losses_wh) {
  const SlotPlan& plan = state.plan;
  if (plan.slot != slot) throw ProtocolViolation(where(state, slot) + "settlement for an unplanned slot");
  if (incoming_wh < 0 || outgoing_wh < 0) throw ProtocolViolation(where(state, slot) + "negative settlement");
  if (incoming_wh > plan.announcement.deficit_wh) {
    throw ProtocolViolation(where(state, slot) + "incoming " + std::to_string(incoming_wh) + " exceeds deficit " +
                            std::to_string(plan.announcement.deficit_wh));
  }
  if (outgoing_wh > plan.announcement.surplus_wh) {
    throw ProtocolViolation(where(state, slot) + "outgoing " + std::to_string(outgoing_wh) + " exceeds surplus " +
                            std::to_string(plan.announcement.surplus_wh));
  }

  const Wh p = state.packet_size_wh;
  const Wh gen = plan.supply.generation_wh;
  const Wh headroom = plan.supply.storage_discharge_headroom_wh;

  std::vector<QueuedRequest> waiting;
  std::vector<QueuedRequest> active;
  for (auto& q : state.pending) (q.earliest_start <= slot ? active : waiting).push_back(q);

  SlotSchedule sched = schedule_slot(std::move(active), gen + headroom + incoming_wh, slot, p);

  // Packet i draws from generation, then storage, then imports.
  std::int64_t index = 0;
  for (const auto& g : sched.grants) {
    GrantRecord cur = g;
    cur.packets_granted = 0;
    for (std::int64_t k = 0; k < g.packets_granted; ++k, ++index) {
      const Wh end = (index + 1) * p;
      const SupplySource src = end <= gen              ? SupplySource::LocalGeneration
                               : end <= gen + headroom ? SupplySource::Storage
                                                       : SupplySource::Import;
      if (cur.packets_granted > 0 && src != cur.supply_source) {
        state.grants.push_back(cur);
        cur.packets_granted = 0;
      }
      cur.supply_source = src;
      ++cur.packets_granted;
    }
    state.grants.push_back(cur);
  }

  SlotLedger ledger;
  ledger.slot = slot;
  ledger.generation_wh = gen;
  ledger.imports_wh = incoming_wh;
  ledger.exports_wh = outgoing_wh;
  ledger.consumption_wh = sched.packets_granted * p;
  ledger.link_losses_attributed_wh = link_losses_wh;

  const Wh net = gen + incoming_wh - outgoing_wh - ledger.consumption_wh;
  const StorageAction act = dispatch_storage(state, slot, net);
  if (act.residual_deficit_wh != 0) {
    throw InvariantFailure(where(state, slot) + "storage could not cover " + std::to_string(act.residual_deficit_wh) +
                           " Wh of granted consumption");
  }
  ledger.storage_charge_wh = act.stored_wh;
  ledger.storage_discharge_wh = act.discharge_wh;
  ledger.curtailment_wh = act.curtailment_wh;
  if (!ledger.balanced()) throw InvariantFailure(where(state, slot) + "ledger does not balance");

  state.denials.insert(state.denials.end(), sched.denied.begin(), sched.denied.end());
  state.pending = std::move(sched.deferred);
  state.pending.insert(state.pending.end(), waiting.begin(), waiting.end());
  state.ledgers.push_back(ledger);
  return ledger;
}

double self_sufficiency(std::span<const SlotLedger> ledgers) {
  Wh consumption = 0;
  Wh imports = 0;
  for (const auto& l : ledgers) {
    consumption += l.consumption_wh;
    imports += l.imports_wh;
  }
  if (consumption <= 0) return 1.0;
  // Imports that could not fund a whole packet end up stored or curtailed, so
  // imports may exceed consumption on tiny loads.
  return std::clamp(static_cast<double>(consumption - imports) / static_cast<double>(consumption), 0.0, 1.0);
}

}  // namespace packetgrid
