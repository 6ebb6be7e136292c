#include "packetgrid/scheduler.hpp"

#include <algorithm>

#include "packetgrid/errors.hpp"

namespace packetgrid {

QueuedRequest QueuedRequest::from(const PacketRequest& r) {
  QueuedRequest q;
  q.request_id = r.request_id;
  q.load_class = r.load_class;
  q.priority = r.priority;
  q.packet_count = r.packet_count;
  q.earliest_start = r.earliest_start;
  q.deadline = r.deadline;
  q.remaining = r.packet_count;
  return q;
}

std::string_view to_string(DenialReason r) {
  switch (r) {
    case DenialReason::DeadlinePassed: return "deadline_passed";
    case DenialReason::RunBroken: return "run_broken";
    case DenialReason::CannotFit: return "cannot_fit";
  }
  return "?";
}

namespace {

bool rank_before(const QueuedRequest& a, const QueuedRequest& b) {
  if (a.priority != b.priority) return a.priority > b.priority;
  if (a.deadline != b.deadline) return a.deadline < b.deadline;
  return a.request_id < b.request_id;
}

bool same_rank(const QueuedRequest& a, const QueuedRequest& b) {
  return a.priority == b.priority && a.deadline == b.deadline;
}

}  // namespace

std::int64_t wanted_packets(const std::vector<QueuedRequest>& queue, Slot slot) {
  std::int64_t wanted = 0;
  for (const auto& q : queue) {
    if (q.deadline < slot || q.earliest_start > slot || q.remaining <= 0) continue;
    if (q.load_class == LoadClass::Interruptible) {
      wanted += q.remaining;
    } else if (q.running || q.fits_from(slot)) {
      wanted += 1;
    }
  }
  return wanted;
}

SlotSchedule schedule_slot(std::vector<QueuedRequest> queue, Wh supply_wh_total, Slot slot, Wh packet_size_wh) {
  if (packet_size_wh <= 0) throw ConfigError("packet_size_wh must be positive");
  const std::int64_t capacity = supply_wh_total > 0 ? supply_wh_total / packet_size_wh : 0;
  return schedule_slot_packets(std::move(queue), capacity, slot);
}

SlotSchedule schedule_slot_packets(std::vector<QueuedRequest> queue, std::int64_t capacity_packets, Slot slot) {
  SlotSchedule out;
  out.capacity_packets = std::max<std::int64_t>(0, capacity_packets);
  std::int64_t cap = out.capacity_packets;

  const std::size_t n = queue.size();
  std::vector<std::int64_t> granted(n, 0);
  std::vector<GrantKind> kind(n, GrantKind::Interruptible);
  std::vector<bool> denied(n, false);
  std::vector<std::size_t> grant_order;

  auto grant_one = [&](std::size_t i, GrantKind k) {
    if (granted[i] == 0) {
      grant_order.push_back(i);
      kind[i] = k;
    }
    ++granted[i];
    --queue[i].remaining;
    --cap;
  };
  auto deny = [&](std::size_t i, DenialReason reason) {
    denied[i] = true;
    out.denied.push_back({queue[i].request_id, slot, queue[i].remaining, reason});
  };

  std::vector<std::size_t> running;
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < n; ++i) {
    auto& q = queue[i];
    if (q.earliest_start > slot) {
      throw InvariantFailure("request " + std::to_string(q.request_id) + " queued before its window opens");
    }
    if (q.remaining <= 0) continue;
    if (q.deadline < slot) {
      deny(i, DenialReason::DeadlinePassed);
    } else if (q.running) {
      running.push_back(i);
    } else {
      others.push_back(i);
    }
  }
  auto by_rank = [&](std::size_t a, std::size_t b) { return rank_before(queue[a], queue[b]); };
  std::sort(running.begin(), running.end(), by_rank);
  std::sort(others.begin(), others.end(), by_rank);

  // 1. started runs must continue or break
  for (std::size_t i : running) {
    auto& q = queue[i];
    if (cap > 0) {
      grant_one(i, GrantKind::RunContinue);
      continue;
    }
    q.running = false;
    q.remaining = q.packet_count;
    ++q.attempt;
    if (q.deadline - slot < q.packet_count) deny(i, DenialReason::RunBroken);
  }

  // 2-4. rank groups, round-robin inside a group
  for (std::size_t g = 0; g < others.size();) {
    std::size_t end = g + 1;
    while (end < others.size() && same_rank(queue[others[g]], queue[others[end]])) ++end;

    std::vector<std::size_t> hungry;
    for (std::size_t k = g; k < end; ++k) {
      const std::size_t i = others[k];
      auto& q = queue[i];
      if (q.load_class == LoadClass::Uninterruptible) {
        if (!q.fits_from(slot)) {
          deny(i, DenialReason::CannotFit);
          continue;
        }
        if (cap > 0) {
          grant_one(i, GrantKind::RunStart);
          q.running = true;
        }
      } else if (cap > 0) {
        grant_one(i, GrantKind::Interruptible);
        if (q.remaining > 0) hungry.push_back(i);
      }
    }
    while (cap > 0 && !hungry.empty()) {
      std::vector<std::size_t> next;
      for (std::size_t i : hungry) {
        if (cap == 0) break;
        grant_one(i, GrantKind::Interruptible);
        if (queue[i].remaining > 0) next.push_back(i);
      }
      hungry.swap(next);
    }
    g = end;
  }

  for (std::size_t i : grant_order) {
    GrantRecord gr;
    gr.request_id = queue[i].request_id;
    gr.slot = slot;
    gr.packets_granted = granted[i];
    gr.kind = kind[i];
    gr.attempt = queue[i].attempt;
    out.grants.push_back(gr);
    out.packets_granted += granted[i];
  }

  for (std::size_t i = 0; i < n; ++i) {
    auto& q = queue[i];
    if (denied[i]) continue;
    if (q.remaining <= 0) {
      out.completed.push_back(q.request_id);
    } else if (q.deadline <= slot) {
      deny(i, DenialReason::DeadlinePassed);
    } else {
      out.deferred.push_back(q);
    }
  }
  return out;
}

}  // namespace packetgrid
