#include "packetgrid/oracle.hpp"

#include <algorithm>
#include <set>

#include "packetgrid/errors.hpp"
#include "packetgrid/scheduler.hpp"

namespace packetgrid {

namespace {

void check_bounds(const OracleInstance& inst) {
  if (inst.requests.size() > kOracleMaxRequests) throw OracleBoundsError("oracle: too many requests");
  if (inst.capacity_per_slot.size() > kOracleMaxSlots) throw OracleBoundsError("oracle: too many slots");
  const auto slots = static_cast<Slot>(inst.capacity_per_slot.size());
  for (const auto& r : inst.requests) {
    if (r.packet_count < 1 || r.packet_count > kOracleMaxPackets) throw OracleBoundsError("oracle: packet count");
    if (r.earliest_start < 0 || r.earliest_start > r.deadline || r.deadline >= slots) {
      throw OracleBoundsError("oracle: window outside the instance");
    }
  }
  for (auto c : inst.capacity_per_slot) {
    if (c < 0) throw OracleBoundsError("oracle: negative capacity");
  }
}

class Enumerator {
 public:
  explicit Enumerator(const OracleInstance& inst) : inst_(inst), cap_(inst.capacity_per_slot) {}

  std::int64_t best() {
    request(0, 0);
    return best_;
  }

 private:
  void request(std::size_t j, std::int64_t served) {
    if (j == inst_.requests.size()) {
      best_ = std::max(best_, served);
      return;
    }
    const auto& r = inst_.requests[j];
    if (r.load_class == LoadClass::Uninterruptible) {
      request(j + 1, served);  // not scheduled
      for (Slot start = r.earliest_start; start + r.packet_count - 1 <= r.deadline; ++start) {
        bool ok = true;
        for (Slot t = start; t < start + r.packet_count; ++t) ok = ok && cap_[t] >= 1;
        if (!ok) continue;
        for (Slot t = start; t < start + r.packet_count; ++t) --cap_[t];
        request(j + 1, served + r.packet_count);
        for (Slot t = start; t < start + r.packet_count; ++t) ++cap_[t];
      }
      return;
    }
    slot(j, r.earliest_start, r.packet_count, served);
  }

  // Every split of request j's remaining packets over slots t..deadline.
  void slot(std::size_t j, Slot t, std::int64_t left, std::int64_t served) {
    const auto& r = inst_.requests[j];
    if (t > r.deadline || left == 0) {
      request(j + 1, served + (r.packet_count - left));
      return;
    }
    const std::int64_t most = std::min(left, cap_[t]);
    for (std::int64_t a = 0; a <= most; ++a) {
      cap_[t] -= a;
      slot(j, t + 1, left - a, served);
      cap_[t] += a;
    }
  }

  const OracleInstance& inst_;
  std::vector<std::int64_t> cap_;
  std::int64_t best_ = 0;
};

}  // namespace

std::int64_t brute_force_schedule(const OracleInstance& instance) {
  check_bounds(instance);
  return Enumerator(instance).best();
}

std::int64_t scheduled_packets(const OracleInstance& instance) {
  std::vector<QueuedRequest> pending;
  std::vector<QueuedRequest> upcoming;
  for (std::size_t i = 0; i < instance.requests.size(); ++i) {
    const auto& r = instance.requests[i];
    QueuedRequest q;
    q.request_id = i;
    q.load_class = r.load_class;
    q.priority = r.priority;
    q.packet_count = r.packet_count;
    q.remaining = r.packet_count;
    q.earliest_start = r.earliest_start;
    q.deadline = r.deadline;
    upcoming.push_back(q);
  }

  std::int64_t interruptible = 0;
  std::set<RequestId> completed_runs;
  for (Slot t = 0; t < static_cast<Slot>(instance.capacity_per_slot.size()); ++t) {
    for (auto it = upcoming.begin(); it != upcoming.end();) {
      if (it->earliest_start <= t) {
        pending.push_back(*it);
        it = upcoming.erase(it);
      } else {
        ++it;
      }
    }
    auto sched = schedule_slot_packets(std::move(pending), instance.capacity_per_slot[static_cast<std::size_t>(t)], t);
    for (const auto& g : sched.grants) {
      if (instance.requests[g.request_id].load_class == LoadClass::Interruptible) interruptible += g.packets_granted;
    }
    for (RequestId id : sched.completed) {
      if (instance.requests[id].load_class == LoadClass::Uninterruptible) completed_runs.insert(id);
    }
    pending = std::move(sched.deferred);
  }
  std::int64_t served = interruptible;
  for (RequestId id : completed_runs) served += instance.requests[id].packet_count;
  return served;
}

}  // namespace packetgrid
