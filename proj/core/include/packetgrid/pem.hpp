#pragma once

// Packetized energy domain types: energy is scheduled in fixed-size integer
// watt-hour packets, each lasting one one-minute slot.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace packetgrid {

using Wh = std::int64_t;
using Slot = std::int64_t;  // one simulated minute
using RequestId = std::uint64_t;

inline constexpr Wh kDefaultPacketSizeWh = 10;

enum class LoadClass { Interruptible, Uninterruptible };

std::string_view to_string(LoadClass c);
LoadClass parse_load_class(std::string_view text);

/// Higher level = more urgent. Totally ordered across one microgrid.
struct Priority {
  std::uint8_t level = 0;
  friend auto operator<=>(const Priority&, const Priority&) = default;
};

struct EnergyPacket {
  Wh size_wh = kDefaultPacketSizeWh;
  std::int32_t duration_slots = 1;
  std::string source;
  std::string sink;
};

EnergyPacket make_packet(Wh configured_size_wh, std::string source, std::string sink);

struct PacketRequest {
  RequestId request_id = 0;
  std::string household_id;
  std::string device_id;
  LoadClass load_class = LoadClass::Interruptible;
  Priority priority;
  std::int64_t packet_count = 0;
  Slot earliest_start = 0;
  Slot deadline = 0;
  Slot arrival_slot = 0;

  Slot window_length() const { return deadline - earliest_start + 1; }
  friend bool operator==(const PacketRequest&, const PacketRequest&) = default;
};

enum class SupplySource { LocalGeneration, Storage, Import };

std::string_view to_string(SupplySource s);

// How a grant relates to the request's run; used by post-hoc audits.
enum class GrantKind { Interruptible, RunStart, RunContinue };

std::string_view to_string(GrantKind k);

struct GrantRecord {
  RequestId request_id = 0;
  Slot slot = 0;
  std::int64_t packets_granted = 0;
  SupplySource supply_source = SupplySource::LocalGeneration;
  GrantKind kind = GrantKind::Interruptible;
  std::int32_t attempt = 0;  // uninterruptible restarts bump this

  friend bool operator==(const GrantRecord&, const GrantRecord&) = default;
};

/// Number of packets needed to cover `total_wh`, rounded up.
/// Throws ConfigError when packet_size_wh <= 0.
std::int64_t quantize_demand(Wh total_wh, Wh packet_size_wh);

struct RequestSpec {
  RequestId request_id = 0;
  std::string household_id;
  std::string device_id;
  LoadClass load_class = LoadClass::Interruptible;
  Priority priority;
  Wh total_wh = 0;
  Slot earliest_start = 0;
  Slot deadline = 0;
  Slot arrival_slot = 0;
};

/// Quantizes the demand and checks the result. Throws InfeasibleRequestError
/// when an uninterruptible block cannot fit the window, ConfigError for an
/// empty window or non-positive demand.
PacketRequest make_request(const RequestSpec& spec, Wh packet_size_wh);

struct Violation {
  std::string code;
  std::string detail;
};

/// Every violated request invariant; empty means ok.
std::vector<Violation> validate_request(const PacketRequest& r);

}  // namespace packetgrid
