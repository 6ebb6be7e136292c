#pragma once

// Per-slot packet multiplexing for one microgrid.
//
// Allocation order inside a slot:
//   1. uninterruptible runs already started (one packet each, or the run fails)
//   2. higher priority first
//   3. earlier deadline first within a priority
//   4. ascending request id
// Requests sharing (priority, deadline) are served round-robin, one packet per
// request per round; an uninterruptible request only ever takes one packet per
// slot. An interruptible request has no per-slot cap.

#include <cstdint>
#include <string>
#include <vector>

#include "packetgrid/pem.hpp"

namespace packetgrid {

struct QueuedRequest {
  RequestId request_id = 0;
  LoadClass load_class = LoadClass::Interruptible;
  Priority priority;
  std::int64_t packet_count = 0;
  Slot earliest_start = 0;
  Slot deadline = 0;

  std::int64_t remaining = 0;
  bool running = false;  // uninterruptible run in progress
  std::int32_t attempt = 0;

  static QueuedRequest from(const PacketRequest& r);

  bool fits_from(Slot slot) const { return deadline - slot + 1 >= remaining; }
};

enum class DenialReason { DeadlinePassed, RunBroken, CannotFit };

std::string_view to_string(DenialReason r);

struct Denial {
  RequestId request_id = 0;
  Slot slot = 0;
  std::int64_t packets = 0;
  DenialReason reason = DenialReason::DeadlinePassed;

  friend bool operator==(const Denial&, const Denial&) = default;
};

struct SlotSchedule {
  std::int64_t capacity_packets = 0;
  std::int64_t packets_granted = 0;
  std::vector<GrantRecord> grants;  // allocation order, supply source not yet assigned
  std::vector<QueuedRequest> deferred;
  std::vector<Denial> denied;
  std::vector<RequestId> completed;
};

/// Packets the queue would take this slot with unlimited supply.
std::int64_t wanted_packets(const std::vector<QueuedRequest>& queue, Slot slot);

/// Allocates floor(supply_wh_total / packet_size_wh) packets over `queue`.
/// Every queued request must satisfy earliest_start <= slot; requests whose
/// deadline is `slot` and still have packets left are denied.
SlotSchedule schedule_slot(std::vector<QueuedRequest> queue, Wh supply_wh_total, Slot slot, Wh packet_size_wh);

/// Same, with the capacity given directly in packets.
SlotSchedule schedule_slot_packets(std::vector<QueuedRequest> queue, std::int64_t capacity_packets, Slot slot);

}  // namespace packetgrid
