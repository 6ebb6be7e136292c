#include "packetgrid/hyper_server.hpp"

#include <algorithm>
#include <set>

#include "packetgrid/errors.hpp"

namespace packetgrid {

namespace {

const InterconnectLink* find_link(std::span<const InterconnectLink> links, const std::string& x,
                                  const std::string& y) {
  for (const auto& l : links) {
    if (l.connects(x, y)) return &l;
  }
  return nullptr;
}

}  // namespace

bool Registration::opted_in_at(Slot slot) const {
  bool in = false;
  for (const auto& c : history) {
    if (c.effective_slot > slot) break;
    in = c.opted_in;
  }
  return in;
}

void validate_links(std::span<const InterconnectLink> links, std::span<const std::string> microgrid_ids) {
  const std::set<std::string> known(microgrid_ids.begin(), microgrid_ids.end());
  std::set<std::pair<std::string, std::string>> pairs;
  std::set<std::string> ids;
  for (const auto& l : links) {
    if (!ids.insert(l.link_id).second) throw ConfigError("duplicate link id " + l.link_id);
    if (!known.contains(l.endpoint_a) || !known.contains(l.endpoint_b)) {
      throw ConfigError("link " + l.link_id + " references an unknown microgrid");
    }
    if (l.endpoint_a == l.endpoint_b) throw ConfigError("link " + l.link_id + " connects a microgrid to itself");
    if (l.capacity_wh_per_slot < 0) throw ConfigError("link " + l.link_id + " has negative capacity");
    if (l.loss_factor >= Rational(1, 1)) throw ConfigError("link " + l.link_id + " loss factor must be below 1");
    if (!pairs.insert(std::minmax(l.endpoint_a, l.endpoint_b)).second) {
      throw ConfigError("more than one link between " + l.endpoint_a + " and " + l.endpoint_b);
    }
  }
}

std::vector<std::string> deficit_service_order(std::span<const Announcement> announcements,
                                               const ReciprocityLedger& ledger) {
  std::vector<std::pair<Wh, std::string>> keyed;
  for (const auto& a : announcements) {
    if (a.deficit_wh > 0) keyed.emplace_back(ledger.of(a.microgrid_id), a.microgrid_id);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  std::vector<std::string> order;
  order.reserve(keyed.size());
  for (auto& k : keyed) order.push_back(std::move(k.second));
  return order;
}

std::vector<Transfer> match(std::span<const Announcement> announcements, std::span<const InterconnectLink> links,
                            const ReciprocityLedger& ledger, Slot slot) {
  std::map<std::string, Wh> deficit;
  std::map<std::string, Wh> surplus;
  for (const auto& a : announcements) {
    if (deficit.contains(a.microgrid_id)) {
      throw ProtocolViolation("duplicate announcement from " + a.microgrid_id + " at slot " + std::to_string(slot));
    }
    if (a.deficit_wh < 0 || a.surplus_wh < 0 || (a.deficit_wh > 0 && a.surplus_wh > 0)) {
      throw ProtocolViolation("malformed announcement from " + a.microgrid_id);
    }
    deficit[a.microgrid_id] = a.deficit_wh;
    if (a.surplus_wh > 0) surplus[a.microgrid_id] = a.surplus_wh;
  }

  std::vector<Wh> link_left;
  link_left.reserve(links.size());
  for (const auto& l : links) link_left.push_back(l.capacity_wh_per_slot);

  std::vector<Transfer> out;
  for (const auto& taker : deficit_service_order(announcements, ledger)) {
    Wh need = deficit[taker];

    std::vector<std::pair<Wh, std::string>> givers;
    for (const auto& [id, left] : surplus) {
      if (left > 0 && id != taker) givers.emplace_back(left, id);
    }
    std::sort(givers.begin(), givers.end(), [](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first > y.first;
      return x.second < y.second;
    });

    for (const auto& [unused, giver] : givers) {
      if (need <= 0) break;
      std::size_t li = links.size();
      for (std::size_t i = 0; i < links.size(); ++i) {
        if (links[i].connects(giver, taker)) li = i;
      }
      if (li == links.size() || link_left[li] <= 0) continue;
      const auto& link = links[li];

      const Rational keep(link.loss_factor.den() - link.loss_factor.num(), link.loss_factor.den());
      const Rational gross_up(keep.den(), keep.num());
      Wh sent = std::min({gross_up.mul_ceil(need), surplus[giver], link_left[li]});
      Wh received = sent - link.loss_factor.mul_ceil(sent);
      if (received <= 0) continue;
      // Smallest send that still delivers `received`.
      sent = gross_up.mul_ceil(received);
      const Wh loss = link.loss_factor.mul_ceil(sent);
      received = sent - loss;

      need -= received;
      surplus[giver] -= sent;
      link_left[li] -= sent;
      out.push_back({slot, giver, taker, link.link_id, sent, received, loss});
    }
  }
  return out;
}

Settlement settle(std::span<const Transfer> transfers, std::span<const InterconnectLink> links, Slot slot) {
  Settlement s;
  std::map<std::string, Wh> used;
  for (const auto& t : transfers) {
    const InterconnectLink* link = find_link(links, t.from_microgrid, t.to_microgrid);
    if (link == nullptr) {
      throw InvariantFailure("slot " + std::to_string(slot) + ": transfer " + t.from_microgrid + " -> " +
                             t.to_microgrid + " has no direct link");
    }
    if (t.sent_wh < 0 || t.received_wh != t.sent_wh - t.loss_wh || t.loss_wh != link->loss_factor.mul_ceil(t.sent_wh)) {
      throw InvariantFailure("slot " + std::to_string(slot) + ": inconsistent loss accounting on " + link->link_id);
    }
    used[link->link_id] += t.sent_wh;
    auto& from = s.flows[t.from_microgrid];
    from.outgoing_wh += t.sent_wh;
    auto& to = s.flows[t.to_microgrid];
    to.incoming_wh += t.received_wh;
    to.losses_wh += t.loss_wh;
  }
  for (const auto& l : links) {
    auto it = used.find(l.link_id);
    if (it == used.end()) continue;
    s.link_usage.push_back({slot, l.link_id, it->second, l.capacity_wh_per_slot});
    if (it->second > l.capacity_wh_per_slot) {
      throw InvariantFailure("slot " + std::to_string(slot) + ": link " + l.link_id + " carries " +
                             std::to_string(it->second) + " Wh over capacity " +
                             std::to_string(l.capacity_wh_per_slot));
    }
  }
  return s;
}

void update_reciprocity(ReciprocityLedger& ledger, std::span<const Transfer> transfers) {
  for (const auto& t : transfers) {
    ledger.balance[t.from_microgrid] += t.sent_wh;
    ledger.balance[t.to_microgrid] -= t.sent_wh;
  }
}

HyperServer::HyperServer(std::vector<std::string> microgrid_ids, std::vector<InterconnectLink> links)
    : links_(std::move(links)) {
  validate_links(links_, microgrid_ids);
  for (auto& id : microgrid_ids) {
    Registration r{id, {{0, true}}};
    if (!registrations_.emplace(id, std::move(r)).second) throw ConfigError("duplicate microgrid id " + id);
    ledger_.balance[id] = 0;
  }
}

const Registration& HyperServer::register_microgrid(const std::string& microgrid_id, bool opted_in, Slot slot) {
  auto it = registrations_.find(microgrid_id);
  if (it == registrations_.end()) throw ConfigError("unknown microgrid " + microgrid_id);
  auto& hist = it->second.history;
  const Slot effective = slot + 1;
  while (!hist.empty() && hist.back().effective_slot >= effective) hist.pop_back();
  hist.push_back({effective, opted_in});
  return it->second;
}

bool HyperServer::participates(const std::string& microgrid_id, Slot slot) const {
  auto it = registrations_.find(microgrid_id);
  return it != registrations_.end() && it->second.opted_in_at(slot);
}

Settlement HyperServer::run_slot(std::span<const Announcement> announcements, Slot slot) {
  std::vector<Announcement> accepted;
  for (const auto& a : announcements) {
    if (!registrations_.contains(a.microgrid_id)) throw ProtocolViolation("announcement from unknown " + a.microgrid_id);
    if (participates(a.microgrid_id, slot)) accepted.push_back(a);
  }
  auto transfers = match(accepted, links_, ledger_, slot);
  Settlement s = settle(transfers, links_, slot);
  update_reciprocity(ledger_, transfers);
  transfers_.insert(transfers_.end(), transfers.begin(), transfers.end());
  link_audit_.insert(link_audit_.end(), s.link_usage.begin(), s.link_usage.end());
  return s;
}

}  // namespace packetgrid
