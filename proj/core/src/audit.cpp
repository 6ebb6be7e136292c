#include "packetgrid/audit.hpp"

#include <algorithm>
#include <map>

namespace packetgrid {

namespace {

using SlotGrants = std::map<Slot, std::map<RequestId, std::int64_t>>;

SlotGrants grants_by_slot(const MicrogridRun& run) {
  SlotGrants out;
  for (const auto& g : run.grants) out[g.slot][g.request_id] += g.packets_granted;
  return out;
}

}  // namespace

std::vector<AuditFinding> audit_priority_soundness(const MicrogridRun& run) {
  std::vector<AuditFinding> out;
  if (run.requests.empty()) return out;

  const SlotGrants by_slot = grants_by_slot(run);
  std::map<RequestId, Slot> denied_at;
  for (const auto& d : run.denials) denied_at.emplace(d.request_id, d.slot);

  struct Track {
    const PacketRequest* req;
    std::int64_t remaining;
    bool running = false;
  };
  std::vector<const PacketRequest*> order;
  for (const auto& r : run.requests) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const auto* a, const auto* b) { return a->earliest_start < b->earliest_start; });

  Slot last = 0;
  for (const auto* r : order) last = std::max(last, r->deadline);

  std::vector<Track> active;
  std::size_t next = 0;
  static const std::map<RequestId, std::int64_t> kNone;
  for (Slot t = order.front()->earliest_start; t <= last; ++t) {
    while (next < order.size() && order[next]->earliest_start <= t) {
      active.push_back({order[next], order[next]->packet_count});
      ++next;
    }
    auto slot_it = by_slot.find(t);
    const auto& granted = slot_it == by_slot.end() ? kNone : slot_it->second;
    auto granted_to = [&](RequestId id) -> std::int64_t {
      auto it = granted.find(id);
      return it == granted.end() ? 0 : it->second;
    };

    int highest_unmet = -1;
    std::vector<std::pair<RequestId, int>> fresh;  // non-continuation grants
    for (auto& tr : active) {
      const auto& r = *tr.req;
      const std::int64_t g = granted_to(r.request_id);
      const int prio = r.priority.level;
      if (r.load_class == LoadClass::Interruptible) {
        if (g > 0) fresh.emplace_back(r.request_id, prio);
        if (tr.remaining - g > 0) highest_unmet = std::max(highest_unmet, prio);
      } else if (tr.running) {
        if (g == 0) {  // run broke
          highest_unmet = std::max(highest_unmet, prio);
          tr.running = false;
          tr.remaining = r.packet_count;
        }
      } else if (g > 0) {
        fresh.emplace_back(r.request_id, prio);
        tr.running = true;
      } else if (r.deadline - t + 1 >= tr.remaining) {
        highest_unmet = std::max(highest_unmet, prio);
      }
      tr.remaining -= g;
    }
    for (const auto& [id, prio] : fresh) {
      if (prio < highest_unmet) {
        out.push_back({run.microgrid_id, t, id,
                       "granted at priority " + std::to_string(prio) + " while priority " +
                           std::to_string(highest_unmet) + " was unmet"});
      }
    }

    std::erase_if(active, [&](const Track& tr) {
      if (tr.remaining <= 0 || tr.req->deadline <= t) return true;
      auto d = denied_at.find(tr.req->request_id);
      return d != denied_at.end() && d->second <= t;
    });
  }
  return out;
}

std::vector<AuditFinding> audit_contiguity(const MicrogridRun& run) {
  std::vector<AuditFinding> out;
  std::map<RequestId, std::vector<std::pair<Slot, std::int64_t>>> per_request;
  for (const auto& [slot, grants] : grants_by_slot(run)) {
    for (const auto& [id, packets] : grants) per_request[id].emplace_back(slot, packets);
  }
  std::map<RequestId, bool> denied;
  for (const auto& d : run.denials) denied[d.request_id] = true;

  for (const auto& r : run.requests) {
    if (r.load_class != LoadClass::Uninterruptible) continue;
    auto it = per_request.find(r.request_id);
    if (it == per_request.end()) {
      if (!denied.contains(r.request_id)) out.push_back({run.microgrid_id, r.earliest_start, r.request_id, "never served nor denied"});
      continue;
    }
    const auto& slots = it->second;
    std::int64_t run_len = 0;
    Slot prev = -2;
    for (const auto& [slot, packets] : slots) {
      if (packets != 1) out.push_back({run.microgrid_id, slot, r.request_id, "more than one packet in a slot"});
      if (slot < r.earliest_start || slot > r.deadline) out.push_back({run.microgrid_id, slot, r.request_id, "outside window"});
      if (slot != prev + 1) {
        if (run_len == r.packet_count) {
          out.push_back({run.microgrid_id, slot, r.request_id, "served again after completion"});
        }
        run_len = 0;
      }
      ++run_len;
      if (run_len > r.packet_count) out.push_back({run.microgrid_id, slot, r.request_id, "run longer than request"});
      prev = slot;
    }
    if (run_len != r.packet_count && !denied.contains(r.request_id)) {
      out.push_back({run.microgrid_id, prev, r.request_id, "final run incomplete but request not denied"});
    }
    if (run_len == r.packet_count && denied.contains(r.request_id)) {
      out.push_back({run.microgrid_id, prev, r.request_id, "completed request also denied"});
    }
  }
  return out;
}

std::vector<AuditFinding> audit_ledgers(const MicrogridRun& run) {
  std::vector<AuditFinding> out;
  for (const auto& l : run.ledgers) {
    if (!l.balanced()) out.push_back({run.microgrid_id, l.slot, 0, "ledger does not balance"});
  }
  return out;
}

std::vector<AuditFinding> audit_run(const RunResult& result) {
  std::vector<AuditFinding> out;
  for (const auto& mg : result.microgrids) {
    for (auto* fn : {&audit_priority_soundness, &audit_contiguity, &audit_ledgers}) {
      auto f = fn(mg);
      out.insert(out.end(), f.begin(), f.end());
    }
  }
  return out;
}

}  // namespace packetgrid
