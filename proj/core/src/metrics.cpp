#include "packetgrid/metrics.hpp"

#include <algorithm>
#include <map>

namespace packetgrid {

double jain_index(std::span<const double> values) {
  if (values.empty()) return 1.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : values) {
    sum += v;
    sum_sq += v * v;
  }
  if (sum_sq == 0.0) return 1.0;
  return (sum * sum) / (static_cast<double>(values.size()) * sum_sq);
}

namespace {

double ratio(std::int64_t num, std::int64_t den) {
  if (den <= 0) return 0.0;
  return std::clamp(static_cast<double>(num) / static_cast<double>(den), 0.0, 1.0);
}

struct Served {
  std::int64_t requested = 0;
  std::int64_t denied = 0;
};

void fill(MicrogridMetrics& m, const std::map<std::string, Served>& households, Wh packet_size_wh,
          const Rational& multiplier) {
  for (const auto& [id, s] : households) {
    m.requested_packets += s.requested;
    m.denied_packets += s.denied;
  }
  m.unserved_energy_wh = m.denied_packets * packet_size_wh;
  m.packet_blocking_rate = ratio(m.denied_packets, m.requested_packets);
  m.import_share = ratio(m.imports_wh, m.consumption_wh);
  m.network_cost_proxy = static_cast<double>(m.imports_wh) * multiplier.to_double();

  std::vector<double> served;
  for (const auto& [id, s] : households) {
    if (s.requested > 0) served.push_back(static_cast<double>(s.requested - s.denied) / static_cast<double>(s.requested));
  }
  m.fairness = jain_index(served);
}

}  // namespace

Metrics compute_metrics(std::span<const MicrogridRun> runs, std::span<const Transfer> transfers,
                        Wh packet_size_wh, const Rational& network_cost_multiplier) {
  Metrics out;
  std::map<std::string, Served> all_households;
  out.community.microgrid_id = "community";

  for (const auto& run : runs) {
    MicrogridMetrics m;
    m.microgrid_id = run.microgrid_id;
    for (const auto& l : run.ledgers) {
      m.generation_wh += l.generation_wh;
      m.consumption_wh += l.consumption_wh;
      m.imports_wh += l.imports_wh;
      m.exports_wh += l.exports_wh;
      m.curtailment_wh += l.curtailment_wh;
    }
    m.self_sufficiency = self_sufficiency(run.ledgers);

    std::map<RequestId, const PacketRequest*> by_id;
    std::map<std::string, Served> households;
    for (const auto& r : run.requests) {
      by_id.emplace(r.request_id, &r);
      households[r.household_id].requested += r.packet_count;
    }
    for (const auto& d : run.denials) {
      auto it = by_id.find(d.request_id);
      if (it != by_id.end()) households[it->second->household_id].denied += d.packets;
    }
    fill(m, households, packet_size_wh, network_cost_multiplier);

    for (const auto& [id, s] : households) {
      auto& agg = all_households[run.microgrid_id + "/" + id];
      agg.requested += s.requested;
      agg.denied += s.denied;
    }
    out.community.generation_wh += m.generation_wh;
    out.community.consumption_wh += m.consumption_wh;
    out.community.exports_wh += m.exports_wh;
    out.community.curtailment_wh += m.curtailment_wh;
    out.microgrids.push_back(std::move(m));
  }

  // Imports between member microgrids do not leave the community.
  Wh internal_imports = 0;
  for (const auto& t : transfers) {
    internal_imports += t.received_wh;
    out.link_losses_wh += t.loss_wh;
  }
  out.community.imports_wh = internal_imports;
  fill(out.community, all_households, packet_size_wh, network_cost_multiplier);
  out.community.self_sufficiency = 1.0;  // closed scenario: no external imports
  return out;
}

}  // namespace packetgrid
