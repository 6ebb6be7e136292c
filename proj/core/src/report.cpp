#include "packetgrid/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <system_error>

#include <nlohmann/json.hpp>

#include "packetgrid/errors.hpp"
#include "packetgrid/scenario_io.hpp"

namespace packetgrid {

using json = nlohmann::ordered_json;

std::string format_ratio(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

namespace {

json metrics_json(const MicrogridMetrics& m) {
  return {{"microgrid_id", m.microgrid_id},
          {"self_sufficiency", format_ratio(m.self_sufficiency)},
          {"generation_wh", m.generation_wh},
          {"consumption_wh", m.consumption_wh},
          {"imports_wh", m.imports_wh},
          {"exports_wh", m.exports_wh},
          {"curtailment_wh", m.curtailment_wh},
          {"unserved_energy_wh", m.unserved_energy_wh},
          {"requested_packets", m.requested_packets},
          {"denied_packets", m.denied_packets},
          {"packet_blocking_rate", format_ratio(m.packet_blocking_rate)},
          {"import_share", format_ratio(m.import_share)},
          {"fairness", format_ratio(m.fairness)},
          {"network_cost_proxy", format_ratio(m.network_cost_proxy)}};
}

double cumulative_ratio(Wh consumption, Wh imports) {
  if (consumption <= 0) return 1.0;
  return std::clamp(static_cast<double>(consumption - imports) / static_cast<double>(consumption), 0.0, 1.0);
}

}  // namespace

std::string run_json(const RunResult& result) {
  const auto& c = result.config;
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["config"] = {{"scenario", c.scenario_name},
                   {"mode", std::string(to_string(c.mode))},
                   {"seed", c.seed},
                   {"horizon_slots", c.horizon_slots},
                   {"slots_per_day", c.slots_per_day},
                   {"packet_size_wh", c.packet_size_wh},
                   {"network_cost_multiplier", c.network_cost_multiplier.to_string()}};

  json per_mg = json::array();
  for (const auto& m : result.metrics.microgrids) per_mg.push_back(metrics_json(m));
  doc["metrics"] = {{"community", metrics_json(result.metrics.community)},
                    {"link_losses_wh", result.metrics.link_losses_wh},
                    {"microgrids", std::move(per_mg)}};

  json runs = json::array();
  for (const auto& mg : result.microgrids) {
    std::map<std::string, std::int64_t> reasons;
    for (const auto& d : mg.denials) reasons[std::string(to_string(d.reason))] += 1;
    runs.push_back({{"microgrid_id", mg.microgrid_id},
                    {"requests", mg.requests.size()},
                    {"grant_records", mg.grants.size()},
                    {"denials", mg.denials.size()},
                    {"denials_by_reason", reasons},
                    {"initial_soc_wh", mg.initial_soc_wh},
                    {"final_soc_wh", mg.final_soc_wh}});
  }
  doc["microgrids"] = std::move(runs);

  json reciprocity = json::object();
  for (const auto& [id, bal] : result.reciprocity.balance) reciprocity[id] = bal;
  doc["reciprocity"] = std::move(reciprocity);

  Wh sent = 0;
  Wh received = 0;
  Wh peak_use = 0;
  for (const auto& t : result.transfers) {
    sent += t.sent_wh;
    received += t.received_wh;
  }
  for (const auto& u : result.link_audit) peak_use = std::max(peak_use, u.used_wh);
  doc["transfers"] = {{"count", result.transfers.size()},
                      {"sent_wh", sent},
                      {"received_wh", received},
                      {"loss_wh", sent - received},
                      {"peak_link_use_wh", peak_use}};
  doc["community_conserved"] = community_conserved(result);
  return doc.dump(2) + "\n";
}

std::string metrics_csv(const RunResult& result) {
  std::string out =
      "slot,microgrid_id,generation_wh,consumption_wh,imports_wh,exports_wh,curtailment_wh,soc_wh,unserved_wh,"
      "self_sufficiency_cumulative\n";
  const Wh p = result.config.packet_size_wh;
  struct Cursor {
    Wh soc = 0;
    Wh consumption = 0;
    Wh imports = 0;
    std::map<Slot, Wh> unserved;
  };
  std::vector<Cursor> cursors(result.microgrids.size());
  for (std::size_t m = 0; m < result.microgrids.size(); ++m) {
    cursors[m].soc = result.microgrids[m].initial_soc_wh;
    for (const auto& d : result.microgrids[m].denials) cursors[m].unserved[d.slot] += d.packets * p;
  }
  for (Slot t = 0; t < result.config.horizon_slots; ++t) {
    for (std::size_t m = 0; m < result.microgrids.size(); ++m) {
      const auto& mg = result.microgrids[m];
      if (static_cast<std::size_t>(t) >= mg.ledgers.size()) continue;
      const auto& l = mg.ledgers[static_cast<std::size_t>(t)];
      auto& cur = cursors[m];
      cur.soc += l.storage_charge_wh - l.storage_discharge_wh;
      cur.consumption += l.consumption_wh;
      cur.imports += l.imports_wh;
      auto u = cur.unserved.find(t);
      out += std::to_string(t) + "," + mg.microgrid_id + "," + std::to_string(l.generation_wh) + "," +
             std::to_string(l.consumption_wh) + "," + std::to_string(l.imports_wh) + "," +
             std::to_string(l.exports_wh) + "," + std::to_string(l.curtailment_wh) + "," + std::to_string(cur.soc) +
             "," + std::to_string(u == cur.unserved.end() ? 0 : u->second) + "," +
             format_ratio(cumulative_ratio(cur.consumption, cur.imports)) + "\n";
    }
  }
  return out;
}

std::string ledger_csv(const RunResult& result) {
  std::string out =
      "slot,microgrid_id,generation_wh,storage_discharge_wh,imports_wh,consumption_wh,storage_charge_wh,exports_wh,"
      "curtailment_wh,link_losses_attributed_wh\n";
  for (Slot t = 0; t < result.config.horizon_slots; ++t) {
    for (const auto& mg : result.microgrids) {
      if (static_cast<std::size_t>(t) >= mg.ledgers.size()) continue;
      const auto& l = mg.ledgers[static_cast<std::size_t>(t)];
      out += std::to_string(l.slot) + "," + mg.microgrid_id + "," + std::to_string(l.generation_wh) + "," +
             std::to_string(l.storage_discharge_wh) + "," + std::to_string(l.imports_wh) + "," +
             std::to_string(l.consumption_wh) + "," + std::to_string(l.storage_charge_wh) + "," +
             std::to_string(l.exports_wh) + "," + std::to_string(l.curtailment_wh) + "," +
             std::to_string(l.link_losses_attributed_wh) + "\n";
    }
  }
  return out;
}

std::string transfers_csv(const RunResult& result) {
  std::string out = "slot,from,to,sent_wh,received_wh,loss_wh\n";
  for (const auto& t : result.transfers) {
    out += std::to_string(t.slot) + "," + t.from_microgrid + "," + t.to_microgrid + "," +
           std::to_string(t.sent_wh) + "," + std::to_string(t.received_wh) + "," + std::to_string(t.loss_wh) + "\n";
  }
  return out;
}

std::string summary_line(const RunResult& result) {
  const auto& c = result.metrics.community;
  return "self_sufficiency=" + format_ratio(c.self_sufficiency) + " unserved_wh=" +
         std::to_string(c.unserved_energy_wh) + " blocking_rate=" + format_ratio(c.packet_blocking_rate);
}

std::string summary_text(const RunResult& result) {
  const auto& c = result.config;
  std::string out;
  out += "scenario: " + c.scenario_name + "\n";
  out += "mode: " + std::string(to_string(c.mode)) + "\n";
  out += "seed: " + std::to_string(c.seed) + "\n";
  out += "horizon_slots: " + std::to_string(c.horizon_slots) + "\n";
  out += "packet_size_wh: " + std::to_string(c.packet_size_wh) + "\n";
  out += summary_line(result) + "\n";
  out += "link_losses_wh: " + std::to_string(result.metrics.link_losses_wh) + "\n\n";

  char row[256];
  std::snprintf(row, sizeof row, "%-16s %16s %14s %14s %14s %14s %10s\n", "microgrid", "self_sufficiency",
                "consumption_wh", "imports_wh", "exports_wh", "unserved_wh", "fairness");
  out += row;
  for (const auto& m : result.metrics.microgrids) {
    std::snprintf(row, sizeof row, "%-16s %16s %14lld %14lld %14lld %14lld %10s\n", m.microgrid_id.c_str(),
                  format_ratio(m.self_sufficiency).c_str(), static_cast<long long>(m.consumption_wh),
                  static_cast<long long>(m.imports_wh), static_cast<long long>(m.exports_wh),
                  static_cast<long long>(m.unserved_energy_wh), format_ratio(m.fairness).c_str());
    out += row;
  }
  return out;
}

void write_report_bundle(const RunResult& result, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const std::pair<const char*, std::string> files[] = {
      {"run.json", run_json(result)},
      {"metrics.csv", metrics_csv(result)},
      {"transfers.csv", transfers_csv(result)},
      {"ledger.csv", ledger_csv(result)},
      {"summary.txt", summary_text(result)},
  };
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  try {
    for (const auto& [name, content] : files) write_file(dir / name, content);
  } catch (...) {
    for (const auto& f : files) fs::remove(dir / f.first, ec);
    throw;
  }
}

}  // namespace packetgrid
