#include "packetgrid/engine.hpp"

#include <algorithm>
#include <map>

#include "packetgrid/errors.hpp"
#include "packetgrid/random.hpp"

namespace packetgrid {

PacketRequest without_deferral(PacketRequest r) {
  r.deadline = r.load_class == LoadClass::Interruptible ? r.earliest_start : r.earliest_start + r.packet_count - 1;
  return r;
}

namespace {

Wh total_soc(const std::vector<StorageUnit>& units) {
  Wh s = 0;
  for (const auto& u : units) s += u.soc_wh;
  return s;
}

RunResult run_impl(const Scenario& sc, Mode mode, std::uint64_t seed) {
  if (auto diags = validate_scenario(sc); !diags.empty()) {
    throw ConfigError("scenario invalid at " + diags.front().pointer + ": " + diags.front().message + " (" +
                      std::to_string(diags.size()) + " finding(s))");
  }
  const bool commons = mode == Mode::Commons;
  const Wh p = sc.packet_size_wh;

  std::vector<MicrogridState> states;
  std::vector<RequestId> next_id;
  std::vector<std::string> ids;
  states.reserve(sc.microgrids.size());
  for (const auto& spec : sc.microgrids) {
    MicrogridState st;
    st.microgrid_id = spec.microgrid_id;
    st.packet_size_wh = p;
    st.households = spec.households;
    st.generation = spec.generation;
    st.storage = spec.storage;
    std::vector<PacketRequest> fixed = spec.requests;
    RequestId id = 0;
    for (auto& r : fixed) {
      r.request_id = id++;
      if (!commons) r = without_deferral(std::move(r));
    }
    enqueue_requests(st, std::move(fixed));
    next_id.push_back(id);
    ids.push_back(spec.microgrid_id);
    states.push_back(std::move(st));
  }
  std::vector<Wh> initial_soc;
  for (const auto& st : states) initial_soc.push_back(total_soc(st.storage));

  HyperServer hyper(ids, sc.links);
  std::vector<ParticipationEvent> events = sc.participation;
  std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.slot < b.slot; });
  std::size_t next_event = 0;

  std::vector<std::vector<std::vector<Wh>>> history(states.size());
  std::vector<std::vector<Wh>> today(states.size());
  std::vector<Forecast> forecasts(states.size());
  DayFrame day;

  std::vector<Announcement> announcements(states.size());
  for (Slot slot = 0; slot < sc.horizon_slots; ++slot) {
    try {
      if (slot % sc.slots_per_day == 0) {
        day.day_index = slot / sc.slots_per_day;
        day.first_slot = slot;
        day.length = std::min(sc.slots_per_day, sc.horizon_slots - slot);
        for (std::size_t m = 0; m < states.size(); ++m) {
          auto& st = states[m];
          std::vector<PacketRequest> fresh;
          for (const auto& hh : st.households) {
            RngStream rng(derive_seed(seed, hh.household_id, static_cast<std::uint64_t>(day.day_index)));
            auto profile = classify_and_aggregate(collect_demands(hh, day, rng), hh, p, day, next_id[m]);
            next_id[m] += profile.requests.size();
            for (auto& r : profile.requests) fresh.push_back(commons ? std::move(r) : without_deferral(std::move(r)));
          }
          enqueue_requests(st, std::move(fresh));
          forecasts[m] = update_forecast(history[m], sc.forecast.window_days, sc.slots_per_day);
          today[m].assign(static_cast<std::size_t>(day.length), 0);
        }
      }

      while (next_event < events.size() && events[next_event].slot == slot) {
        const auto& ev = events[next_event++];
        hyper.register_microgrid(ev.microgrid_id, ev.opted_in, ev.slot);
      }

      for (std::size_t m = 0; m < states.size(); ++m) {
        std::optional<Wh> target;
        if (commons) {
          target = storage_reserve_target(states[m], forecasts[m], slot, sc.slots_per_day,
                                          sc.forecast.reserve_lookahead_slots);
        }
        announcements[m] = begin_slot(states[m], slot, target);
      }

      Settlement settlement;
      if (commons) settlement = hyper.run_slot(announcements, slot);

      for (std::size_t m = 0; m < states.size(); ++m) {
        MicrogridFlow flow;
        if (auto it = settlement.flows.find(states[m].microgrid_id); it != settlement.flows.end()) flow = it->second;
        const SlotLedger& l = apply_transfers(states[m], slot, flow.incoming_wh, flow.outgoing_wh, flow.losses_wh);
        today[m][static_cast<std::size_t>(slot - day.first_slot)] = l.consumption_wh;
      }

      if (slot == day.last_slot()) {
        for (std::size_t m = 0; m < states.size(); ++m) history[m].push_back(std::move(today[m]));
      }
    } catch (const InvariantFailure& e) {
      throw InvariantFailure(std::string("run aborted at slot ") + std::to_string(slot) + ": " + e.what());
    }
  }

  RunResult result;
  result.config = {sc.name, mode, seed, sc.horizon_slots, sc.slots_per_day, p, sc.network_cost_multiplier};
  for (std::size_t m = 0; m < states.size(); ++m) {
    auto& st = states[m];
    MicrogridRun run;
    run.microgrid_id = st.microgrid_id;
    run.requests = std::move(st.requests);
    run.grants = std::move(st.grants);
    run.denials = std::move(st.denials);
    run.ledgers = std::move(st.ledgers);
    run.initial_soc_wh = initial_soc[m];
    run.final_soc_wh = total_soc(st.storage);
    if (!st.pending.empty()) {
      throw InvariantFailure("microgrid " + st.microgrid_id + " ended with " + std::to_string(st.pending.size()) +
                             " open requests");
    }
    result.microgrids.push_back(std::move(run));
  }
  result.transfers = hyper.transfers();
  result.link_audit = hyper.link_audit();
  result.reciprocity = hyper.ledger();
  result.metrics = compute_metrics(result.microgrids, result.transfers, p, sc.network_cost_multiplier);
  if (!community_conserved(result)) throw InvariantFailure("community conservation identity does not hold");
  return result;
}

}  // namespace

RunResult run(const Scenario& scenario, std::optional<std::uint64_t> seed_override) {
  return run_impl(scenario, scenario.mode, seed_override.value_or(scenario.seed));
}

RunResult run_uncoordinated(const Scenario& scenario, std::optional<std::uint64_t> seed_override) {
  return run_impl(scenario, Mode::Uncoordinated, seed_override.value_or(scenario.seed));
}

bool community_conserved(const RunResult& result) {
  Wh generation = 0;
  Wh consumption = 0;
  Wh curtailment = 0;
  Wh soc_delta = 0;
  Wh booked_delta = 0;
  Wh imports = 0;
  Wh exports = 0;
  for (const auto& mg : result.microgrids) {
    for (const auto& l : mg.ledgers) {
      if (!l.balanced()) return false;
      imports += l.imports_wh;
      exports += l.exports_wh;
      generation += l.generation_wh;
      consumption += l.consumption_wh;
      curtailment += l.curtailment_wh;
      booked_delta += l.storage_charge_wh - l.storage_discharge_wh;
    }
    soc_delta += mg.final_soc_wh - mg.initial_soc_wh;
  }
  Wh losses = 0;
  Wh sent = 0;
  Wh received = 0;
  for (const auto& t : result.transfers) {
    losses += t.loss_wh;
    sent += t.sent_wh;
    received += t.received_wh;
  }
  if (sent != received + losses || imports != received || exports != sent) return false;
  if (booked_delta != soc_delta) return false;
  return generation == consumption + soc_delta + curtailment + losses;
}

}  // namespace packetgrid
