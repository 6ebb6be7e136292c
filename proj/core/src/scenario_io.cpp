#include "packetgrid/scenario_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "packetgrid/errors.hpp"

namespace packetgrid {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("error writing " + path.string());
}

namespace {

using TraceRows = std::map<std::string, std::map<Slot, Wh>>;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

template <typename T>
bool to_int(std::string_view s, T& out) {
  s = trim(s);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && !s.empty();
}

TraceRows parse_trace_rows(std::string_view text) {
  TraceRows rows;
  std::size_t line_no = 0;
  bool header = true;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (header) {
      if (line != "slot,asset_id,generation_wh") {
        throw IngestError("trace header must be 'slot,asset_id,generation_wh', got '" + std::string(line) + "'");
      }
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      throw IngestError("trace line " + std::to_string(line_no) + ": expected 3 fields");
    }
    Slot slot = 0;
    Wh value = 0;
    const std::string asset(trim(line.substr(c1 + 1, c2 - c1 - 1)));
    if (!to_int(line.substr(0, c1), slot) || slot < 0) {
      throw IngestError("trace line " + std::to_string(line_no) + ": bad slot");
    }
    if (!to_int(line.substr(c2 + 1), value) || value < 0) {
      throw IngestError("trace line " + std::to_string(line_no) + ": bad generation_wh");
    }
    if (asset.empty()) throw IngestError("trace line " + std::to_string(line_no) + ": empty asset_id");
    if (!rows[asset].emplace(slot, value).second) {
      throw IngestError("trace line " + std::to_string(line_no) + ": duplicate slot " + std::to_string(slot) +
                        " for asset " + asset);
    }
  }
  if (header) throw IngestError("trace file is empty");
  return rows;
}

std::vector<Wh> series_for(const std::string& asset, const std::map<Slot, Wh>& rows, Slot horizon) {
  if (!rows.empty() && rows.rbegin()->first >= horizon) {
    throw IngestError("asset " + asset + " trace has " + std::to_string(rows.rbegin()->first + 1) +
                      " slots, expected " + std::to_string(horizon));
  }
  std::vector<Wh> out(static_cast<std::size_t>(std::max<Slot>(horizon, 0)), 0);
  for (Slot t = 0; t < horizon; ++t) {
    auto it = rows.find(t);
    if (it == rows.end()) {
      throw IngestError("asset " + asset + " trace is missing slot " + std::to_string(t) + " (expected " +
                        std::to_string(horizon) + " slots)");
    }
    out[static_cast<std::size_t>(t)] = it->second;
  }
  return out;
}

class Reader {
 public:
  Reader(std::vector<Diagnostic>& diags, std::filesystem::path base_dir) : diags_(diags), base_(std::move(base_dir)) {}

  void error(std::string ptr, std::string msg) { diags_.push_back({std::move(ptr), std::move(msg)}); }

  bool expect_object(const json& j, const std::string& ptr) {
    if (!j.is_object()) {
      error(ptr.empty() ? "/" : ptr, "expected an object");
      return false;
    }
    return true;
  }

  void allowed_keys(const json& obj, const std::string& ptr, std::initializer_list<std::string_view> keys) {
    for (const auto& [k, v] : obj.items()) {
      bool ok = false;
      for (auto a : keys) ok = ok || a == k;
      if (!ok) error(ptr + "/" + k, "unknown field");
    }
  }

  const json* field(const json& obj, const char* key, const std::string& ptr, bool required) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) error(ptr + "/" + key, "missing required field");
      return nullptr;
    }
    return &*it;
  }

  template <typename T>
  void integer(const json& obj, const char* key, const std::string& ptr, T& out, bool required = true) {
    const json* f = field(obj, key, ptr, required);
    if (f == nullptr) return;
    if (f->is_number_unsigned()) {
      out = static_cast<T>(f->get<std::uint64_t>());
    } else if (f->is_number_integer()) {
      out = static_cast<T>(f->get<std::int64_t>());
    } else {
      error(ptr + "/" + key, "expected an integer");
    }
  }

  void text(const json& obj, const char* key, const std::string& ptr, std::string& out, bool required = true) {
    const json* f = field(obj, key, ptr, required);
    if (f == nullptr) return;
    if (!f->is_string()) {
      error(ptr + "/" + key, "expected a string");
      return;
    }
    out = f->get<std::string>();
  }

  void boolean(const json& obj, const char* key, const std::string& ptr, bool& out, bool required = true) {
    const json* f = field(obj, key, ptr, required);
    if (f == nullptr) return;
    if (!f->is_boolean()) {
      error(ptr + "/" + key, "expected a boolean");
      return;
    }
    out = f->get<bool>();
  }

  void rational(const json& obj, const char* key, const std::string& ptr, Rational& out, bool required = true) {
    const json* f = field(obj, key, ptr, required);
    if (f == nullptr) return;
    try {
      if (f->is_string()) {
        out = Rational::parse(f->get<std::string>());
      } else if (f->is_number()) {
        out = Rational::parse(f->dump());
      } else {
        error(ptr + "/" + key, "expected a number or an 'a/b' string");
      }
    } catch (const Error& e) {
      error(ptr + "/" + key, e.what());
    }
  }

  template <typename Fn>
  void array(const json& obj, const char* key, const std::string& ptr, bool required, Fn&& each) {
    const json* f = field(obj, key, ptr, required);
    if (f == nullptr) return;
    if (!f->is_array()) {
      error(ptr + "/" + key, "expected an array");
      return;
    }
    for (std::size_t i = 0; i < f->size(); ++i) each((*f)[i], ptr + "/" + key + "/" + std::to_string(i));
  }

  LoadClass load_class(const json& obj, const std::string& ptr) {
    std::string s;
    text(obj, "class", ptr, s);
    if (s == "uninterruptible") return LoadClass::Uninterruptible;
    if (!s.empty() && s != "interruptible") error(ptr + "/class", "expected interruptible or uninterruptible");
    return LoadClass::Interruptible;
  }

  Priority priority(const json& obj, const std::string& ptr) {
    std::int64_t level = 0;
    integer(obj, "priority", ptr, level);
    if (level < 0 || level > 255) {
      error(ptr + "/priority", "must lie in [0, 255]");
      level = 0;
    }
    return Priority{static_cast<std::uint8_t>(level)};
  }

  std::optional<std::vector<Wh>> trace_from_file(const std::string& file, const std::string& asset, Slot horizon,
                                                 const std::string& ptr) {
    const std::filesystem::path path = base_ / file;
    auto cached = files_.find(path.string());
    if (cached == files_.end()) {
      std::optional<TraceRows> rows;
      try {
        rows = parse_trace_rows(read_file(path));
      } catch (const IoError&) {
        error(ptr, "cannot read trace file " + path.string());
      } catch (const IngestError& e) {
        error(ptr, path.string() + ": " + e.what());
      }
      cached = files_.emplace(path.string(), std::move(rows)).first;
    }
    if (!cached->second) return std::nullopt;
    auto it = cached->second->find(asset);
    if (it == cached->second->end()) {
      error(ptr, "asset " + asset + " not found in " + path.string());
      return std::nullopt;
    }
    try {
      return series_for(asset, it->second, horizon);
    } catch (const IngestError& e) {
      error(ptr, path.string() + ": " + e.what());
      return std::nullopt;
    }
  }

 private:
  std::vector<Diagnostic>& diags_;
  std::filesystem::path base_;
  std::map<std::string, std::optional<TraceRows>> files_;
};

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::map<std::string, std::vector<Wh>> parse_trace_csv(std::string_view csv_text, Slot horizon_slots) {
  std::map<std::string, std::vector<Wh>> out;
  for (const auto& [asset, rows] : parse_trace_rows(csv_text)) out[asset] = series_for(asset, rows, horizon_slots);
  return out;
}

std::string trace_csv(const std::vector<GenerationAsset>& assets) {
  std::string out = "slot,asset_id,generation_wh\n";
  for (const auto& a : assets) {
    for (std::size_t t = 0; t < a.trace.size(); ++t) {
      out += std::to_string(t) + "," + a.asset_id + "," + std::to_string(a.trace[t]) + "\n";
    }
  }
  return out;
}

ScenarioLoad parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir) {
  ScenarioLoad load;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(json_text, e.byte == 0 ? 0 : e.byte - 1);
    load.diagnostics.push_back({"", "JSON parse error at line " + std::to_string(line) + ", column " +
                                        std::to_string(col) + ": " + e.what()});
    return load;
  }

  Reader rd(load.diagnostics, base_dir);
  Scenario sc;
  if (!rd.expect_object(doc, "")) return load;
  rd.allowed_keys(doc, "", {"name", "horizon_slots", "slots_per_day", "packet_size_wh", "seed", "mode",
                            "network_cost_multiplier", "forecast", "microgrids", "links", "participation"});
  rd.text(doc, "name", "", sc.name, false);
  rd.integer(doc, "horizon_slots", "", sc.horizon_slots);
  rd.integer(doc, "slots_per_day", "", sc.slots_per_day, false);
  rd.integer(doc, "packet_size_wh", "", sc.packet_size_wh, false);
  if (const json* seed = rd.field(doc, "seed", "", false)) {
    if (seed->is_number_unsigned()) {
      sc.seed = seed->get<std::uint64_t>();
    } else {
      rd.error("/seed", "expected a non-negative integer");
    }
  }
  std::string mode = "commons";
  rd.text(doc, "mode", "", mode, false);
  try {
    sc.mode = parse_mode(mode);
  } catch (const ConfigError& e) {
    rd.error("/mode", e.what());
  }
  rd.rational(doc, "network_cost_multiplier", "", sc.network_cost_multiplier, false);
  if (const json* fc = rd.field(doc, "forecast", "", false); fc && rd.expect_object(*fc, "/forecast")) {
    rd.allowed_keys(*fc, "/forecast", {"window_days", "reserve_lookahead_slots"});
    rd.integer(*fc, "window_days", "/forecast", sc.forecast.window_days, false);
    rd.integer(*fc, "reserve_lookahead_slots", "/forecast", sc.forecast.reserve_lookahead_slots, false);
  }

  rd.array(doc, "microgrids", "", true, [&](const json& mj, const std::string& mp) {
    if (!rd.expect_object(mj, mp)) return;
    rd.allowed_keys(mj, mp, {"id", "households", "generation", "storage", "requests"});
    MicrogridSpec mg;
    rd.text(mj, "id", mp, mg.microgrid_id);

    rd.array(mj, "households", mp, false, [&](const json& hj, const std::string& hp) {
      if (!rd.expect_object(hj, hp)) return;
      rd.allowed_keys(hj, hp, {"id", "appliances", "preference_order"});
      HouseholdProfile hh;
      rd.text(hj, "id", hp, hh.household_id);
      rd.array(hj, "appliances", hp, true, [&](const json& aj, const std::string& ap) {
        if (!rd.expect_object(aj, ap)) return;
        rd.allowed_keys(aj, ap, {"device_id", "label", "class", "priority", "energy_per_activation_wh",
                                 "activations_per_day", "flexibility_window_slots"});
        ApplianceSpec a;
        rd.text(aj, "device_id", ap, a.device_id);
        rd.text(aj, "label", ap, a.label, false);
        a.load_class = rd.load_class(aj, ap);
        a.priority = rd.priority(aj, ap);
        rd.integer(aj, "energy_per_activation_wh", ap, a.energy_per_activation_wh);
        rd.integer(aj, "activations_per_day", ap, a.activations_per_day);
        rd.integer(aj, "flexibility_window_slots", ap, a.flexibility_window_slots);
        hh.appliances.push_back(std::move(a));
      });
      rd.array(hj, "preference_order", hp, false, [&](const json& pj, const std::string& pp) {
        if (!pj.is_string()) {
          rd.error(pp, "expected a device id");
          return;
        }
        hh.preference_order.push_back(pj.get<std::string>());
      });
      mg.households.push_back(std::move(hh));
    });

    rd.array(mj, "generation", mp, false, [&](const json& gj, const std::string& gp) {
      if (!rd.expect_object(gj, gp)) return;
      rd.allowed_keys(gj, gp, {"asset_id", "trace", "trace_file"});
      GenerationAsset g;
      rd.text(gj, "asset_id", gp, g.asset_id);
      const bool inline_trace = gj.contains("trace");
      const bool file_trace = gj.contains("trace_file");
      if (inline_trace == file_trace) {
        rd.error(gp, "exactly one of trace or trace_file is required");
      } else if (inline_trace) {
        rd.array(gj, "trace", gp, true, [&](const json& v, const std::string& vp) {
          if (v.is_number_integer()) {
            g.trace.push_back(v.get<Wh>());
          } else {
            rd.error(vp, "expected an integer Wh value");
          }
        });
      } else {
        std::string file;
        rd.text(gj, "trace_file", gp, file);
        if (!file.empty()) {
          if (auto series = rd.trace_from_file(file, g.asset_id, sc.horizon_slots, gp + "/trace_file")) {
            g.trace = std::move(*series);
          }
        }
      }
      mg.generation.push_back(std::move(g));
    });

    rd.array(mj, "storage", mp, false, [&](const json& sj, const std::string& sp) {
      if (!rd.expect_object(sj, sp)) return;
      rd.allowed_keys(sj, sp, {"id", "capacity_wh", "soc_wh", "max_charge_wh_per_slot", "max_discharge_wh_per_slot",
                               "round_trip_efficiency"});
      StorageUnit u;
      rd.text(sj, "id", sp, u.storage_id);
      rd.integer(sj, "capacity_wh", sp, u.capacity_wh);
      rd.integer(sj, "soc_wh", sp, u.soc_wh, false);
      rd.integer(sj, "max_charge_wh_per_slot", sp, u.max_charge_wh_per_slot);
      rd.integer(sj, "max_discharge_wh_per_slot", sp, u.max_discharge_wh_per_slot);
      rd.rational(sj, "round_trip_efficiency", sp, u.round_trip_efficiency, false);
      mg.storage.push_back(std::move(u));
    });

    rd.array(mj, "requests", mp, false, [&](const json& rj, const std::string& rp) {
      if (!rd.expect_object(rj, rp)) return;
      rd.allowed_keys(rj, rp, {"household_id", "device_id", "class", "priority", "total_wh", "packet_count",
                               "earliest_start", "deadline", "arrival_slot"});
      PacketRequest r;
      rd.text(rj, "household_id", rp, r.household_id, false);
      rd.text(rj, "device_id", rp, r.device_id);
      r.load_class = rd.load_class(rj, rp);
      r.priority = rd.priority(rj, rp);
      rd.integer(rj, "earliest_start", rp, r.earliest_start);
      rd.integer(rj, "deadline", rp, r.deadline);
      r.arrival_slot = r.earliest_start;
      rd.integer(rj, "arrival_slot", rp, r.arrival_slot, false);
      if (rj.contains("packet_count") == rj.contains("total_wh")) {
        rd.error(rp, "exactly one of total_wh or packet_count is required");
      } else if (rj.contains("packet_count")) {
        rd.integer(rj, "packet_count", rp, r.packet_count);
      } else {
        Wh total = 0;
        rd.integer(rj, "total_wh", rp, total);
        if (total <= 0) {
          rd.error(rp + "/total_wh", "must be positive");
        } else if (sc.packet_size_wh > 0) {
          r.packet_count = quantize_demand(total, sc.packet_size_wh);
        }
      }
      mg.requests.push_back(std::move(r));
    });
    sc.microgrids.push_back(std::move(mg));
  });

  rd.array(doc, "links", "", false, [&](const json& lj, const std::string& lp) {
    if (!rd.expect_object(lj, lp)) return;
    rd.allowed_keys(lj, lp, {"id", "endpoints", "capacity_wh_per_slot", "loss_factor"});
    InterconnectLink l;
    rd.text(lj, "id", lp, l.link_id);
    const json* ep = rd.field(lj, "endpoints", lp, true);
    if (ep != nullptr) {
      if (!ep->is_array() || ep->size() != 2 || !(*ep)[0].is_string() || !(*ep)[1].is_string()) {
        rd.error(lp + "/endpoints", "expected two microgrid ids");
      } else {
        l.endpoint_a = (*ep)[0].get<std::string>();
        l.endpoint_b = (*ep)[1].get<std::string>();
      }
    }
    rd.integer(lj, "capacity_wh_per_slot", lp, l.capacity_wh_per_slot);
    rd.rational(lj, "loss_factor", lp, l.loss_factor, false);
    sc.links.push_back(std::move(l));
  });

  rd.array(doc, "participation", "", false, [&](const json& pj, const std::string& pp) {
    if (!rd.expect_object(pj, pp)) return;
    rd.allowed_keys(pj, pp, {"microgrid", "slot", "opted_in"});
    ParticipationEvent ev;
    rd.text(pj, "microgrid", pp, ev.microgrid_id);
    rd.integer(pj, "slot", pp, ev.slot);
    rd.boolean(pj, "opted_in", pp, ev.opted_in);
    sc.participation.push_back(std::move(ev));
  });

  // Semantic checks only make sense on a structurally sound document.
  if (load.diagnostics.empty()) load.diagnostics = validate_scenario(sc);
  if (load.diagnostics.empty()) load.scenario = std::move(sc);
  return load;
}

ScenarioLoad load_scenario(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return parse_scenario(text, path.parent_path());
}

Scenario load_scenario_or_throw(const std::filesystem::path& path) {
  ScenarioLoad load = load_scenario(path);
  if (!load.scenario) {
    const auto& d = load.diagnostics.front();
    throw ConfigError(path.string() + " " + (d.pointer.empty() ? "/" : d.pointer) + ": " + d.message);
  }
  return std::move(*load.scenario);
}

std::string scenario_to_json(const Scenario& sc) {
  json doc;
  doc["name"] = sc.name;
  doc["horizon_slots"] = sc.horizon_slots;
  doc["slots_per_day"] = sc.slots_per_day;
  doc["packet_size_wh"] = sc.packet_size_wh;
  doc["seed"] = sc.seed;
  doc["mode"] = std::string(to_string(sc.mode));
  doc["network_cost_multiplier"] = sc.network_cost_multiplier.to_string();
  doc["forecast"] = {{"window_days", sc.forecast.window_days},
                     {"reserve_lookahead_slots", sc.forecast.reserve_lookahead_slots}};
  doc["microgrids"] = json::array();
  for (const auto& mg : sc.microgrids) {
    json m;
    m["id"] = mg.microgrid_id;
    m["households"] = json::array();
    for (const auto& hh : mg.households) {
      json h;
      h["id"] = hh.household_id;
      h["appliances"] = json::array();
      for (const auto& a : hh.appliances) {
        h["appliances"].push_back({{"device_id", a.device_id},
                                   {"label", a.label},
                                   {"class", std::string(to_string(a.load_class))},
                                   {"priority", a.priority.level},
                                   {"energy_per_activation_wh", a.energy_per_activation_wh},
                                   {"activations_per_day", a.activations_per_day},
                                   {"flexibility_window_slots", a.flexibility_window_slots}});
      }
      if (!hh.preference_order.empty()) h["preference_order"] = hh.preference_order;
      m["households"].push_back(std::move(h));
    }
    m["generation"] = json::array();
    for (const auto& g : mg.generation) m["generation"].push_back({{"asset_id", g.asset_id}, {"trace", g.trace}});
    m["storage"] = json::array();
    for (const auto& u : mg.storage) {
      m["storage"].push_back({{"id", u.storage_id},
                              {"capacity_wh", u.capacity_wh},
                              {"soc_wh", u.soc_wh},
                              {"max_charge_wh_per_slot", u.max_charge_wh_per_slot},
                              {"max_discharge_wh_per_slot", u.max_discharge_wh_per_slot},
                              {"round_trip_efficiency", u.round_trip_efficiency.to_string()}});
    }
    if (!mg.requests.empty()) {
      m["requests"] = json::array();
      for (const auto& r : mg.requests) {
        m["requests"].push_back({{"household_id", r.household_id},
                                 {"device_id", r.device_id},
                                 {"class", std::string(to_string(r.load_class))},
                                 {"priority", r.priority.level},
                                 {"packet_count", r.packet_count},
                                 {"earliest_start", r.earliest_start},
                                 {"deadline", r.deadline},
                                 {"arrival_slot", r.arrival_slot}});
      }
    }
    doc["microgrids"].push_back(std::move(m));
  }
  doc["links"] = json::array();
  for (const auto& l : sc.links) {
    doc["links"].push_back({{"id", l.link_id},
                            {"endpoints", {l.endpoint_a, l.endpoint_b}},
                            {"capacity_wh_per_slot", l.capacity_wh_per_slot},
                            {"loss_factor", l.loss_factor.to_string()}});
  }
  if (!sc.participation.empty()) {
    doc["participation"] = json::array();
    for (const auto& p : sc.participation) {
      doc["participation"].push_back({{"microgrid", p.microgrid_id}, {"slot", p.slot}, {"opted_in", p.opted_in}});
    }
  }
  return doc.dump(2) + "\n";
}

}  // namespace packetgrid
