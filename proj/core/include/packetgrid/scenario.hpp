#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "packetgrid/energy_server.hpp"
#include "packetgrid/hems.hpp"
#include "packetgrid/hyper_server.hpp"
#include "packetgrid/pem.hpp"
#include "packetgrid/rational.hpp"

namespace packetgrid {

enum class Mode { Commons, Uncoordinated };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view text);

struct MicrogridSpec {
  std::string microgrid_id;
  std::vector<HouseholdProfile> households;
  std::vector<GenerationAsset> generation;
  std::vector<StorageUnit> storage;
  // Fixed requests in addition to the generated ones. Their request ids are
  // reassigned in file order, before any generated request.
  std::vector<PacketRequest> requests;
};

struct ParticipationEvent {
  std::string microgrid_id;
  Slot slot = 0;
  bool opted_in = true;
};

struct ForecastConfig {
  std::int64_t window_days = 7;
  Slot reserve_lookahead_slots = 60;
};

struct Scenario {
  std::string name = "scenario";
  Slot horizon_slots = 1440;
  Slot slots_per_day = 1440;
  Wh packet_size_wh = kDefaultPacketSizeWh;
  std::vector<MicrogridSpec> microgrids;
  std::vector<InterconnectLink> links;
  std::vector<ParticipationEvent> participation;
  Mode mode = Mode::Commons;
  std::uint64_t seed = 0;
  Rational network_cost_multiplier = Rational(2, 1);
  ForecastConfig forecast;
};

/// A finding with the JSON pointer of the offending scenario element.
struct Diagnostic {
  std::string pointer;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Every scenario invariant violation; empty means the scenario is runnable.
std::vector<Diagnostic> validate_scenario(const Scenario& scenario);

}  // namespace packetgrid
