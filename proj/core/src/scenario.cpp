#include "packetgrid/scenario.hpp"

#include <algorithm>
#include <set>

#include "packetgrid/errors.hpp"

namespace packetgrid {

std::string_view to_string(Mode m) { return m == Mode::Commons ? "commons" : "uncoordinated"; }

Mode parse_mode(std::string_view text) {
  if (text == "commons") return Mode::Commons;
  if (text == "uncoordinated") return Mode::Uncoordinated;
  throw ConfigError("unknown mode '" + std::string(text) + "' (expected commons or uncoordinated)");
}

namespace {

std::string idx(std::size_t i) { return "/" + std::to_string(i); }

Slot shortest_day(const Scenario& s) {
  if (s.slots_per_day <= 0 || s.horizon_slots <= 0) return 0;
  const Slot tail = s.horizon_slots % s.slots_per_day;
  return tail == 0 ? s.slots_per_day : std::min(tail, s.slots_per_day);
}

}  // namespace

std::vector<Diagnostic> validate_scenario(const Scenario& s) {
  std::vector<Diagnostic> out;
  auto add = [&](std::string ptr, std::string msg) { out.push_back({std::move(ptr), std::move(msg)}); };

  if (s.horizon_slots <= 0) add("/horizon_slots", "must be positive");
  if (s.slots_per_day <= 0) add("/slots_per_day", "must be positive");
  if (s.packet_size_wh <= 0) add("/packet_size_wh", "must be positive");
  if (s.forecast.window_days < 1) add("/forecast/window_days", "must be at least 1");
  if (s.forecast.reserve_lookahead_slots < 0) add("/forecast/reserve_lookahead_slots", "must be non-negative");
  if (s.microgrids.empty()) add("/microgrids", "at least one microgrid is required");

  const Slot min_day = shortest_day(s);
  std::set<std::string> mg_ids;
  std::set<std::string> household_ids;
  for (std::size_t m = 0; m < s.microgrids.size(); ++m) {
    const auto& mg = s.microgrids[m];
    const std::string base = "/microgrids" + idx(m);
    if (mg.microgrid_id.empty()) add(base + "/id", "must not be empty");
    if (!mg_ids.insert(mg.microgrid_id).second) add(base + "/id", "duplicate microgrid id " + mg.microgrid_id);

    for (std::size_t h = 0; h < mg.households.size(); ++h) {
      const auto& hh = mg.households[h];
      const std::string hb = base + "/households" + idx(h);
      if (!household_ids.insert(hh.household_id).second) {
        add(hb + "/id", "duplicate household id " + hh.household_id);
      }
      if (s.packet_size_wh > 0) {
        for (const auto& v : validate_household(hh, s.packet_size_wh)) add(hb, v.code + ": " + v.detail);
        for (std::size_t a = 0; a < hh.appliances.size(); ++a) {
          const auto& ap = hh.appliances[a];
          if (ap.load_class != LoadClass::Uninterruptible || ap.energy_per_activation_wh <= 0) continue;
          const auto packets = quantize_demand(ap.energy_per_activation_wh, s.packet_size_wh);
          if (min_day > 0 && packets > min_day) {
            add(hb + "/appliances" + idx(a), "device " + ap.device_id + " needs " + std::to_string(packets) +
                                                 " contiguous slots but the shortest simulated day has " +
                                                 std::to_string(min_day));
          }
        }
      }
    }

    std::set<std::string> asset_ids;
    for (std::size_t g = 0; g < mg.generation.size(); ++g) {
      const auto& asset = mg.generation[g];
      const std::string gb = base + "/generation" + idx(g);
      if (!asset_ids.insert(asset.asset_id).second) add(gb + "/asset_id", "duplicate asset id " + asset.asset_id);
      if (static_cast<Slot>(asset.trace.size()) != s.horizon_slots) {
        add(gb, "asset " + asset.asset_id + " trace has " + std::to_string(asset.trace.size()) +
                    " slots, expected " + std::to_string(s.horizon_slots));
      }
      for (std::size_t t = 0; t < asset.trace.size(); ++t) {
        if (asset.trace[t] < 0) {
          add(gb + "/trace" + idx(t), "asset " + asset.asset_id + " has negative generation");
          break;
        }
      }
    }

    std::set<std::string> storage_ids;
    for (std::size_t u = 0; u < mg.storage.size(); ++u) {
      const auto& st = mg.storage[u];
      const std::string sb = base + "/storage" + idx(u);
      if (!storage_ids.insert(st.storage_id).second) add(sb + "/id", "duplicate storage id " + st.storage_id);
      if (st.capacity_wh <= 0) add(sb + "/capacity_wh", "must be positive");
      if (st.soc_wh < 0 || st.soc_wh > st.capacity_wh) add(sb + "/soc_wh", "must lie in [0, capacity_wh]");
      if (st.max_charge_wh_per_slot < 0) add(sb + "/max_charge_wh_per_slot", "must be non-negative");
      if (st.max_discharge_wh_per_slot < 0) add(sb + "/max_discharge_wh_per_slot", "must be non-negative");
      if (st.round_trip_efficiency.num() == 0 || st.round_trip_efficiency > Rational(1, 1)) {
        add(sb + "/round_trip_efficiency", "must lie in (0, 1]");
      }
    }

    for (std::size_t r = 0; r < mg.requests.size(); ++r) {
      const auto& req = mg.requests[r];
      const std::string rb = base + "/requests" + idx(r);
      for (const auto& v : validate_request(req)) add(rb, v.code + ": " + v.detail);
      if (req.deadline >= s.horizon_slots) add(rb + "/deadline", "beyond the horizon");
    }
  }

  std::set<std::pair<std::string, std::string>> pairs;
  std::set<std::string> link_ids;
  for (std::size_t l = 0; l < s.links.size(); ++l) {
    const auto& link = s.links[l];
    const std::string lb = "/links" + idx(l);
    if (!link_ids.insert(link.link_id).second) add(lb + "/id", "duplicate link id " + link.link_id);
    if (!mg_ids.contains(link.endpoint_a) || !mg_ids.contains(link.endpoint_b)) {
      add(lb + "/endpoints", "unknown microgrid in " + link.endpoint_a + " <-> " + link.endpoint_b);
    }
    if (link.endpoint_a == link.endpoint_b) add(lb + "/endpoints", "endpoints must differ");
    if (!pairs.insert(std::minmax(link.endpoint_a, link.endpoint_b)).second) {
      add(lb + "/endpoints", "more than one link between " + link.endpoint_a + " and " + link.endpoint_b);
    }
    if (link.capacity_wh_per_slot < 0) add(lb + "/capacity_wh_per_slot", "must be non-negative");
    if (link.loss_factor >= Rational(1, 1)) add(lb + "/loss_factor", "must lie in [0, 1)");
  }

  for (std::size_t p = 0; p < s.participation.size(); ++p) {
    const auto& ev = s.participation[p];
    const std::string pb = "/participation" + idx(p);
    if (!mg_ids.contains(ev.microgrid_id)) add(pb + "/microgrid", "unknown microgrid " + ev.microgrid_id);
    if (ev.slot < 0 || ev.slot >= s.horizon_slots) add(pb + "/slot", "outside the horizon");
  }
  return out;
}

}  // namespace packetgrid
