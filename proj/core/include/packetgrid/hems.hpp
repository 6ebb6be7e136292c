#pragma once

// Home energy management: turns a household's appliance set into a daily list
// of packet requests, and keeps a per-slot demand forecast from history.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "packetgrid/pem.hpp"
#include "packetgrid/random.hpp"

namespace packetgrid {

struct ApplianceSpec {
  std::string device_id;
  std::string label;
  LoadClass load_class = LoadClass::Interruptible;
  Priority priority;
  Wh energy_per_activation_wh = 0;
  std::int64_t activations_per_day = 0;
  Slot flexibility_window_slots = 1;
};

struct HouseholdProfile {
  std::string household_id;
  std::vector<ApplianceSpec> appliances;
  // Optional ranking of device ids, consulted only between equal priorities.
  std::vector<std::string> preference_order;
};

std::vector<Violation> validate_household(const HouseholdProfile& household, Wh packet_size_wh);

/// The slots one simulated day covers. The last day of a horizon may be short.
struct DayFrame {
  std::int64_t day_index = 0;
  Slot first_slot = 0;
  Slot length = 1440;

  Slot last_slot() const { return first_slot + length - 1; }
};

struct ActivationEvent {
  std::string device_id;
  Slot desired_start_slot = 0;  // absolute
  Wh energy_wh = 0;

  friend bool operator==(const ActivationEvent&, const ActivationEvent&) = default;
};

/// Places every activation of every appliance uniformly in the day, leaving
/// room for the appliance's flexibility window.
std::vector<ActivationEvent> collect_demands(const HouseholdProfile& household, const DayFrame& day,
                                             RngStream& rng);

struct DailyLoadProfile {
  std::string household_id;
  std::int64_t day_index = 0;
  std::vector<PacketRequest> requests;  // by arrival, then priority, then preference
};

/// One request per event. Request ids are assigned consecutively from
/// `first_request_id` in profile order.
DailyLoadProfile classify_and_aggregate(const std::vector<ActivationEvent>& events,
                                        const HouseholdProfile& household, Wh packet_size_wh,
                                        const DayFrame& day, RequestId first_request_id = 0);

struct Forecast {
  std::vector<Wh> per_slot_wh;
  std::int64_t history_days_used = 0;
};

/// Per-slot mean of the trailing `window_days` days (half-up rounding).
/// Empty history yields an all-zero forecast of `slots_per_day` entries.
Forecast update_forecast(std::span<const std::vector<Wh>> history, std::int64_t window_days, Slot slots_per_day);

}  // namespace packetgrid
