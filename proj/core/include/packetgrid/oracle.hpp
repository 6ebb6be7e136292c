#pragma once

// Exhaustive reference for small scheduling instances. Used to check the
// greedy scheduler, never by the simulation itself.

#include <cstdint>
#include <vector>

#include "packetgrid/pem.hpp"

namespace packetgrid {

struct OracleRequest {
  LoadClass load_class = LoadClass::Interruptible;
  std::int64_t packet_count = 1;
  Slot earliest_start = 0;
  Slot deadline = 0;
  Priority priority;
};

struct OracleInstance {
  std::vector<OracleRequest> requests;
  std::vector<std::int64_t> capacity_per_slot;  // slot i = index i
};

inline constexpr std::size_t kOracleMaxRequests = 3;
inline constexpr std::size_t kOracleMaxSlots = 6;
inline constexpr std::int64_t kOracleMaxPackets = 4;

/// Maximum number of packets any feasible schedule serves: every per-slot
/// assignment within windows and capacities is enumerated; an uninterruptible
/// request counts only as one contiguous run at one packet per slot.
/// Throws OracleBoundsError outside the enumeration bounds.
std::int64_t brute_force_schedule(const OracleInstance& instance);

/// Packets served by the production scheduler on the same instance, run slot
/// by slot. Broken uninterruptible runs count nothing.
std::int64_t scheduled_packets(const OracleInstance& instance);

}  // namespace packetgrid
