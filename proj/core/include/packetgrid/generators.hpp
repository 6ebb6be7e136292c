#pragma once

// Deterministic scenario builders for fuzzing, the mode-comparison suite and
// performance runs. The same arguments always build the same scenario.

#include <cstdint>
#include <string>
#include <vector>

#include "packetgrid/scenario.hpp"

namespace packetgrid {

/// Reference appliance set: cooking, laundry, dishwasher, space heater,
/// e-bike and EV charging.
std::vector<ApplianceSpec> appliance_catalog();

/// Random closed-world scenario: 1 to 4 microgrids, horizon up to 1440 slots,
/// random households, traces, storage, fixed requests, links and
/// participation changes. Always passes validate_scenario.
Scenario fuzz_scenario(std::uint64_t seed);

/// Version tag of the shifted-generation suite; bump when the builder changes.
inline constexpr const char* kShiftedSuiteVersion = "shifted-v1";

/// Member `index` of the mode-comparison suite: microgrids whose generation
/// peaks at different times of day, fully linked, each short of energy on
/// its own at some hours.
Scenario shifted_generation_scenario(std::uint64_t index);

/// `microgrids` x `households` x `horizon_slots` Commons scenario with a ring
/// of links, for performance measurement.
Scenario desk_scale_scenario(std::uint64_t seed, int microgrids = 10, int households = 50,
                             Slot horizon_slots = 1440);

/// Bell-shaped daily trace peaking at `peak_slot` with half-width `half_width`,
/// repeating every `slots_per_day`.
std::vector<Wh> bell_trace(Slot horizon_slots, Slot slots_per_day, Slot peak_slot, Slot half_width, Wh peak_wh);

}  // namespace packetgrid
