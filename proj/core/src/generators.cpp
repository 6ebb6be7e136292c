#include "packetgrid/generators.hpp"

#include <algorithm>
#include <cstdlib>

#include "packetgrid/random.hpp"

namespace packetgrid {

namespace {

ApplianceSpec appliance(std::string id, LoadClass cls, std::uint8_t prio, Wh energy, std::int64_t per_day,
                        Slot window) {
  ApplianceSpec a;
  a.device_id = id;
  a.label = std::move(id);
  a.load_class = cls;
  a.priority = Priority{prio};
  a.energy_per_activation_wh = energy;
  a.activations_per_day = per_day;
  a.flexibility_window_slots = window;
  return a;
}

Slot shortest_day(Slot horizon, Slot per_day) {
  const Slot tail = horizon % per_day;
  return tail == 0 ? per_day : tail;
}

std::string name(const char* prefix, std::int64_t i) { return prefix + std::to_string(i); }

// Catalog appliance resized so every activation fits a day of `day_slots`.
ApplianceSpec fitted(ApplianceSpec a, Wh packet_size_wh, Slot day_slots, RngStream& rng) {
  const Wh cap = std::max<Wh>(packet_size_wh, packet_size_wh * std::max<Slot>(1, day_slots / 2));
  a.energy_per_activation_wh = rng.uniform(1, std::min(a.energy_per_activation_wh, cap));
  a.flexibility_window_slots = std::clamp<Slot>(rng.uniform(1, a.flexibility_window_slots), 1, day_slots);
  if (a.load_class == LoadClass::Uninterruptible) {
    const Slot packets = (a.energy_per_activation_wh + packet_size_wh - 1) / packet_size_wh;
    a.flexibility_window_slots = std::max(a.flexibility_window_slots, packets);
  }
  a.activations_per_day = rng.uniform(0, 2);
  return a;
}

}  // namespace

std::vector<ApplianceSpec> appliance_catalog() {
  using enum LoadClass;
  return {
      appliance("cooking", Uninterruptible, 250, 300, 2, 45),
      appliance("laundry", Uninterruptible, 200, 600, 1, 240),
      appliance("heater", Interruptible, 180, 400, 2, 90),
      appliance("dishwasher", Uninterruptible, 150, 500, 1, 300),
      appliance("ebike", Interruptible, 100, 300, 1, 360),
      appliance("ev", Interruptible, 80, 1500, 1, 600),
  };
}

std::vector<Wh> bell_trace(Slot horizon_slots, Slot slots_per_day, Slot peak_slot, Slot half_width, Wh peak_wh) {
  std::vector<Wh> out(static_cast<std::size_t>(horizon_slots), 0);
  const Slot w = std::max<Slot>(1, half_width);
  for (Slot t = 0; t < horizon_slots; ++t) {
    const Slot offset = t % slots_per_day;
    Slot d = std::abs(offset - peak_slot);
    d = std::min(d, slots_per_day - d);  // wraps around midnight
    if (d < w) out[static_cast<std::size_t>(t)] = peak_wh * (w * w - d * d) / (w * w);
  }
  return out;
}

Scenario fuzz_scenario(std::uint64_t seed) {
  RngStream rng(derive_seed(seed, "fuzz", 0));
  Scenario sc;
  sc.name = "fuzz-" + std::to_string(seed);
  sc.seed = seed;
  const Slot per_day_choices[] = {60, 240, 1440};
  const Wh packet_choices[] = {5, 10, 25};
  sc.slots_per_day = per_day_choices[rng.uniform(0, 2)];
  sc.horizon_slots = rng.uniform(1, 4) == 1 ? rng.uniform(1, 1440) : rng.uniform(1, std::min<Slot>(1440, 3 * sc.slots_per_day));
  sc.packet_size_wh = packet_choices[rng.uniform(0, 2)];
  sc.forecast.window_days = rng.uniform(1, 7);
  sc.forecast.reserve_lookahead_slots = rng.uniform(0, 120);
  const Slot day = std::min(sc.slots_per_day, shortest_day(sc.horizon_slots, sc.slots_per_day));
  const Wh p = sc.packet_size_wh;

  const auto catalog = appliance_catalog();
  const int n_mg = static_cast<int>(rng.uniform(1, 4));
  for (int m = 0; m < n_mg; ++m) {
    MicrogridSpec mg;
    mg.microgrid_id = name("mg", m);
    const int n_hh = static_cast<int>(rng.uniform(0, 4));
    for (int h = 0; h < n_hh; ++h) {
      HouseholdProfile hh;
      hh.household_id = mg.microgrid_id + "-h" + std::to_string(h);
      for (const auto& a : catalog) {
        if (rng.uniform(0, 2) > 0) hh.appliances.push_back(fitted(a, p, day, rng));
      }
      if (hh.appliances.size() > 1 && rng.uniform(0, 1) == 1) {
        hh.preference_order = {hh.appliances.back().device_id, hh.appliances.front().device_id};
      }
      mg.households.push_back(std::move(hh));
    }

    const int n_gen = static_cast<int>(rng.uniform(0, 2));
    for (int g = 0; g < n_gen; ++g) {
      GenerationAsset asset;
      asset.asset_id = mg.microgrid_id + "-g" + std::to_string(g);
      if (rng.uniform(0, 1) == 0) {
        asset.trace = bell_trace(sc.horizon_slots, sc.slots_per_day, rng.uniform(0, sc.slots_per_day - 1),
                                 rng.uniform(1, sc.slots_per_day / 2 + 1), rng.uniform(0, 20 * p));
      } else {
        asset.trace.resize(static_cast<std::size_t>(sc.horizon_slots));
        Wh level = rng.uniform(0, 5 * p);
        for (auto& v : asset.trace) {
          level = std::clamp<Wh>(level + rng.uniform(-p, p), 0, 8 * p);
          v = rng.uniform(0, 9) == 0 ? rng.uniform(0, 3 * p + 7) : level;
        }
      }
      mg.generation.push_back(std::move(asset));
    }

    const int n_store = static_cast<int>(rng.uniform(0, 2));
    for (int s = 0; s < n_store; ++s) {
      StorageUnit u;
      u.storage_id = mg.microgrid_id + "-s" + std::to_string(s);
      u.capacity_wh = rng.uniform(1, 200 * p);
      u.soc_wh = rng.uniform(0, u.capacity_wh);
      u.max_charge_wh_per_slot = rng.uniform(0, 5 * p);
      u.max_discharge_wh_per_slot = rng.uniform(0, 5 * p);
      const std::int64_t den = rng.uniform(1, 20);
      u.round_trip_efficiency = Rational(rng.uniform(1, den), den);
      mg.storage.push_back(std::move(u));
    }

    const int n_req = static_cast<int>(rng.uniform(0, 3));
    for (int r = 0; r < n_req; ++r) {
      PacketRequest req;
      req.household_id = mg.microgrid_id + "-fixed";
      req.device_id = name("fixed", r);
      req.load_class = rng.uniform(0, 1) == 0 ? LoadClass::Interruptible : LoadClass::Uninterruptible;
      req.priority = Priority{static_cast<std::uint8_t>(rng.uniform(0, 255))};
      req.earliest_start = rng.uniform(0, sc.horizon_slots - 1);
      req.deadline = rng.uniform(req.earliest_start, std::min(sc.horizon_slots - 1, req.earliest_start + 60));
      req.packet_count = rng.uniform(1, std::min<Slot>(8, req.window_length()));
      req.arrival_slot = rng.uniform(std::max<Slot>(0, req.earliest_start - 10), req.earliest_start);
      mg.requests.push_back(std::move(req));
    }
    sc.microgrids.push_back(std::move(mg));
  }

  const Rational losses[] = {Rational(0, 1), Rational(1, 20), Rational(1, 10), Rational(1, 4), Rational(1, 3)};
  int link_no = 0;
  for (int a = 0; a < n_mg; ++a) {
    for (int b = a + 1; b < n_mg; ++b) {
      if (rng.uniform(0, 3) == 0) continue;
      InterconnectLink l;
      l.link_id = name("link", link_no++);
      l.endpoint_a = sc.microgrids[static_cast<std::size_t>(a)].microgrid_id;
      l.endpoint_b = sc.microgrids[static_cast<std::size_t>(b)].microgrid_id;
      l.capacity_wh_per_slot = rng.uniform(0, 10 * p);
      l.loss_factor = losses[rng.uniform(0, 4)];
      sc.links.push_back(std::move(l));
    }
  }
  const int n_events = static_cast<int>(rng.uniform(0, 3));
  for (int e = 0; e < n_events; ++e) {
    sc.participation.push_back({sc.microgrids[static_cast<std::size_t>(rng.uniform(0, n_mg - 1))].microgrid_id,
                                rng.uniform(0, sc.horizon_slots - 1), rng.uniform(0, 1) == 1});
  }
  return sc;
}

Scenario shifted_generation_scenario(std::uint64_t index) {
  RngStream rng(derive_seed(index, kShiftedSuiteVersion, 0));
  Scenario sc;
  sc.name = std::string(kShiftedSuiteVersion) + "-" + std::to_string(index);
  sc.seed = index;
  sc.slots_per_day = 720;
  sc.horizon_slots = 720;
  sc.packet_size_wh = 10;
  const Wh p = sc.packet_size_wh;

  const auto catalog = appliance_catalog();
  const int n_mg = static_cast<int>(rng.uniform(2, 4));
  const Slot phase = sc.slots_per_day / n_mg;
  for (int m = 0; m < n_mg; ++m) {
    MicrogridSpec mg;
    mg.microgrid_id = name("mg", m);
    const int n_hh = static_cast<int>(rng.uniform(3, 6));
    Wh daily_demand = 0;
    for (int h = 0; h < n_hh; ++h) {
      HouseholdProfile hh;
      hh.household_id = mg.microgrid_id + "-h" + std::to_string(h);
      for (const auto& a : catalog) {
        if (rng.uniform(0, 3) == 0) continue;
        ApplianceSpec copy = a;
        copy.flexibility_window_slots = std::min<Slot>(copy.flexibility_window_slots, sc.slots_per_day);
        daily_demand += copy.energy_per_activation_wh * copy.activations_per_day;
        hh.appliances.push_back(std::move(copy));
      }
      mg.households.push_back(std::move(hh));
    }
    // Each microgrid's generation peaks at its own time of day and roughly
    // matches its own daily demand.
    const Slot half_width = rng.uniform(90, 180);
    const Slot peak = (m * phase + rng.uniform(0, phase / 4)) % sc.slots_per_day;
    const Wh scale_pct = rng.uniform(70, 130);
    const Wh peak_wh = std::max<Wh>(p, daily_demand * scale_pct * 3 / (100 * 4 * half_width));
    mg.generation.push_back({mg.microgrid_id + "-pv", bell_trace(sc.horizon_slots, sc.slots_per_day, peak, half_width,
                                                                 peak_wh)});
    if (rng.uniform(0, 2) == 0) {
      StorageUnit u;
      u.storage_id = mg.microgrid_id + "-bat";
      u.capacity_wh = rng.uniform(20, 100) * p;
      u.soc_wh = 0;
      u.max_charge_wh_per_slot = 3 * p;
      u.max_discharge_wh_per_slot = 3 * p;
      u.round_trip_efficiency = Rational(9, 10);
      mg.storage.push_back(std::move(u));
    }
    sc.microgrids.push_back(std::move(mg));
  }
  int link_no = 0;
  for (int a = 0; a < n_mg; ++a) {
    for (int b = a + 1; b < n_mg; ++b) {
      InterconnectLink l;
      l.link_id = name("link", link_no++);
      l.endpoint_a = name("mg", a);
      l.endpoint_b = name("mg", b);
      l.capacity_wh_per_slot = rng.uniform(5, 20) * p;
      l.loss_factor = Rational(rng.uniform(0, 10), 100);
      sc.links.push_back(std::move(l));
    }
  }
  return sc;
}

Scenario desk_scale_scenario(std::uint64_t seed, int microgrids, int households, Slot horizon_slots) {
  RngStream rng(derive_seed(seed, "desk", 0));
  Scenario sc;
  sc.name = "desk-scale";
  sc.seed = seed;
  sc.horizon_slots = horizon_slots;
  sc.slots_per_day = 1440;
  sc.packet_size_wh = 10;
  const auto catalog = appliance_catalog();
  for (int m = 0; m < microgrids; ++m) {
    MicrogridSpec mg;
    mg.microgrid_id = name("mg", m);
    Wh daily_demand = 0;
    for (int h = 0; h < households; ++h) {
      HouseholdProfile hh;
      hh.household_id = mg.microgrid_id + "-h" + std::to_string(h);
      for (const auto& a : catalog) {
        if (rng.uniform(0, 2) == 0) continue;
        daily_demand += a.energy_per_activation_wh * a.activations_per_day;
        hh.appliances.push_back(a);
      }
      mg.households.push_back(std::move(hh));
    }
    const Slot peak = (720 + (m - microgrids / 2) * 60 + 1440) % 1440;
    const Slot half_width = 300;
    mg.generation.push_back({mg.microgrid_id + "-pv",
                             bell_trace(horizon_slots, sc.slots_per_day, peak, half_width,
                                        std::max<Wh>(10, daily_demand * 3 / (2 * 2 * half_width)))});
    StorageUnit u;
    u.storage_id = mg.microgrid_id + "-bat";
    u.capacity_wh = 20000;
    u.soc_wh = 5000;
    u.max_charge_wh_per_slot = 100;
    u.max_discharge_wh_per_slot = 100;
    u.round_trip_efficiency = Rational(9, 10);
    mg.storage.push_back(std::move(u));
    sc.microgrids.push_back(std::move(mg));
  }
  for (int m = 0; microgrids > 1 && m < microgrids; ++m) {
    const int next = (m + 1) % microgrids;
    if (microgrids == 2 && m == 1) break;
    sc.links.push_back({name("link", m), name("mg", m), name("mg", next), 200, Rational(1, 20)});
  }
  return sc;
}

}  // namespace packetgrid
