#include "packetgrid/hems.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>

#include "packetgrid/errors.hpp"

namespace packetgrid {

std::vector<Violation> validate_household(const HouseholdProfile& household, Wh packet_size_wh) {
  std::vector<Violation> out;
  std::set<std::string> ids;
  for (const auto& a : household.appliances) {
    if (!ids.insert(a.device_id).second) {
      out.push_back({"duplicate device", a.device_id});
    }
    if (a.energy_per_activation_wh <= 0) {
      out.push_back({"non-positive energy", a.device_id});
    }
    if (a.activations_per_day < 0) {
      out.push_back({"negative activations", a.device_id});
    }
    if (a.flexibility_window_slots < 1) {
      out.push_back({"window too short", a.device_id + ": flexibility window must be at least one slot"});
    } else if (a.load_class == LoadClass::Uninterruptible && packet_size_wh > 0 && a.energy_per_activation_wh > 0) {
      const auto packets = quantize_demand(a.energy_per_activation_wh, packet_size_wh);
      if (a.flexibility_window_slots < packets) {
        out.push_back({"window too short", a.device_id + ": " + std::to_string(packets) +
                                               " contiguous packets need a window of at least that many slots"});
      }
    }
  }
  std::set<std::string> seen;
  for (const auto& d : household.preference_order) {
    if (!ids.contains(d)) out.push_back({"unknown preference device", d});
    if (!seen.insert(d).second) out.push_back({"duplicate preference device", d});
  }
  return out;
}

std::vector<ActivationEvent> collect_demands(const HouseholdProfile& household, const DayFrame& day,
                                             RngStream& rng) {
  std::vector<ActivationEvent> events;
  for (const auto& a : household.appliances) {
    const Slot latest_offset = std::max<Slot>(0, day.length - a.flexibility_window_slots);
    for (std::int64_t k = 0; k < a.activations_per_day; ++k) {
      const Slot offset = rng.uniform(0, latest_offset);
      events.push_back({a.device_id, day.first_slot + offset, a.energy_per_activation_wh});
    }
  }
  return events;
}

DailyLoadProfile classify_and_aggregate(const std::vector<ActivationEvent>& events,
                                        const HouseholdProfile& household, Wh packet_size_wh,
                                        const DayFrame& day, RequestId first_request_id) {
  std::unordered_map<std::string, std::size_t> appliance_index;
  for (std::size_t i = 0; i < household.appliances.size(); ++i) {
    appliance_index.emplace(household.appliances[i].device_id, i);
  }
  std::unordered_map<std::string, std::size_t> preference_rank;
  for (std::size_t i = 0; i < household.preference_order.size(); ++i) {
    preference_rank.emplace(household.preference_order[i], i);
  }

  struct Keyed {
    PacketRequest request;
    std::size_t pref_rank;
    std::size_t appliance;
    std::size_t event;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(events.size());

  for (std::size_t e = 0; e < events.size(); ++e) {
    const auto& ev = events[e];
    auto it = appliance_index.find(ev.device_id);
    if (it == appliance_index.end()) {
      throw ConfigError("household " + household.household_id + ": event for unknown device " + ev.device_id);
    }
    const ApplianceSpec& a = household.appliances[it->second];

    RequestSpec spec;
    spec.household_id = household.household_id;
    spec.device_id = a.device_id;
    spec.load_class = a.load_class;
    spec.priority = a.priority;
    spec.total_wh = ev.energy_wh;
    spec.earliest_start = ev.desired_start_slot;
    spec.deadline = std::min(ev.desired_start_slot + a.flexibility_window_slots - 1, day.last_slot());
    spec.arrival_slot = ev.desired_start_slot;

    PacketRequest r;
    try {
      r = make_request(spec, packet_size_wh);
    } catch (const InfeasibleRequestError& err) {
      throw InfeasibleRequestError("household " + household.household_id + ", day " +
                                   std::to_string(day.day_index) + ": " + err.what());
    }
    auto pr = preference_rank.find(a.device_id);
    const std::size_t rank = pr != preference_rank.end() ? pr->second : preference_rank.size() + it->second;
    keyed.push_back({std::move(r), rank, it->second, e});
  }

  std::sort(keyed.begin(), keyed.end(), [](const Keyed& x, const Keyed& y) {
    return std::tuple(x.request.arrival_slot, -static_cast<int>(x.request.priority.level), x.pref_rank, x.appliance,
                      x.event) < std::tuple(y.request.arrival_slot, -static_cast<int>(y.request.priority.level),
                                            y.pref_rank, y.appliance, y.event);
  });

  DailyLoadProfile profile{household.household_id, day.day_index, {}};
  profile.requests.reserve(keyed.size());
  RequestId next = first_request_id;
  for (auto& k : keyed) {
    k.request.request_id = next++;
    profile.requests.push_back(std::move(k.request));
  }
  return profile;
}

Forecast update_forecast(std::span<const std::vector<Wh>> history, std::int64_t window_days, Slot slots_per_day) {
  Forecast f;
  f.per_slot_wh.assign(static_cast<std::size_t>(slots_per_day), 0);
  if (history.empty() || window_days <= 0) return f;

  const auto used = static_cast<std::size_t>(std::min<std::int64_t>(window_days, history.size()));
  const auto trailing = history.subspan(history.size() - used);
  f.history_days_used = static_cast<std::int64_t>(used);
  const auto n = static_cast<Wh>(used);
  for (std::size_t s = 0; s < f.per_slot_wh.size(); ++s) {
    Wh sum = 0;
    for (const auto& day : trailing) {
      if (s < day.size()) sum += day[s];
    }
    // half-up for non-negative values
    f.per_slot_wh[s] = (2 * sum + n) / (2 * n);
  }
  return f;
}

}  // namespace packetgrid
