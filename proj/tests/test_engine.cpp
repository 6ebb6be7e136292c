#include <gtest/gtest.h>

#include <map>

#include "packetgrid/audit.hpp"
#include "packetgrid/engine.hpp"
#include "packetgrid/errors.hpp"
#include "packetgrid/generators.hpp"

using namespace packetgrid;

namespace {

PacketRequest fixed(const std::string& hh, LoadClass cls, std::int64_t packets, Slot start, Slot deadline,
                    int prio = 100) {
  PacketRequest r;
  r.household_id = hh;
  r.device_id = "dev";
  r.load_class = cls;
  r.priority = Priority{static_cast<std::uint8_t>(prio)};
  r.packet_count = packets;
  r.earliest_start = start;
  r.deadline = deadline;
  r.arrival_slot = start;
  return r;
}

MicrogridSpec microgrid(const std::string& id, std::vector<Wh> trace) {
  MicrogridSpec mg;
  mg.microgrid_id = id;
  mg.generation.push_back({id + "-pv", std::move(trace)});
  return mg;
}

Scenario small(Slot horizon = 60) {
  Scenario sc;
  sc.name = "small";
  sc.horizon_slots = horizon;
  sc.slots_per_day = horizon;
  sc.packet_size_wh = 10;
  return sc;
}

Wh total_consumption(const RunResult& r) {
  Wh c = 0;
  for (const auto& m : r.metrics.microgrids) c += m.consumption_wh;
  return c;
}

}  // namespace

TEST(Run, ZeroDemandIsFullySelfSufficient) {
  auto sc = small();
  sc.microgrids.push_back(microgrid("a", std::vector<Wh>(60, 25)));
  const auto r = run(sc);
  EXPECT_DOUBLE_EQ(r.metrics.microgrids[0].self_sufficiency, 1.0);
  EXPECT_DOUBLE_EQ(r.metrics.community.self_sufficiency, 1.0);
  EXPECT_EQ(r.metrics.community.unserved_energy_wh, 0);
  EXPECT_TRUE(community_conserved(r));
}

TEST(Run, AmpleGenerationMeansNoImportsNoBlocking) {
  auto sc = small(1440);
  auto mg = microgrid("a", std::vector<Wh>(1440, 100000));
  mg.households.push_back({"h1", appliance_catalog(), {}});
  mg.households.push_back({"h2", appliance_catalog(), {}});
  sc.microgrids.push_back(mg);
  sc.seed = 5;
  const auto r = run(sc);
  EXPECT_EQ(r.metrics.microgrids[0].imports_wh, 0);
  EXPECT_DOUBLE_EQ(r.metrics.microgrids[0].packet_blocking_rate, 0.0);
  EXPECT_GT(r.metrics.microgrids[0].consumption_wh, 0);
}

TEST(Run, MirroredMicrogridsHaveMirroredMetrics) {
  auto sc = small();
  std::vector<Wh> trace(60);
  for (Slot t = 0; t < 60; ++t) trace[static_cast<std::size_t>(t)] = (t * 7) % 40;
  for (const char* id : {"left", "right"}) {
    auto mg = microgrid(id, trace);
    mg.requests = {fixed(std::string(id) + "-h", LoadClass::Interruptible, 30, 0, 40),
                   fixed(std::string(id) + "-h", LoadClass::Uninterruptible, 5, 10, 30, 200)};
    mg.storage.push_back({std::string(id) + "-bat", 200, 50, 20, 20, Rational(9, 10)});
    sc.microgrids.push_back(mg);
  }
  sc.links.push_back({"l", "left", "right", 50, Rational(1, 10)});
  const auto r = run(sc);
  auto a = r.metrics.microgrids[0];
  auto b = r.metrics.microgrids[1];
  b.microgrid_id = a.microgrid_id;
  EXPECT_EQ(a.consumption_wh, b.consumption_wh);
  EXPECT_EQ(a.unserved_energy_wh, b.unserved_energy_wh);
  EXPECT_EQ(a.curtailment_wh, b.curtailment_wh);
  EXPECT_DOUBLE_EQ(a.self_sufficiency, b.self_sufficiency);
  EXPECT_EQ(r.microgrids[0].ledgers, r.microgrids[1].ledgers);
}

TEST(Run, SameSeedSameResult) {
  const auto sc = fuzz_scenario(11);
  const auto a = run(sc);
  const auto b = run(sc);
  EXPECT_EQ(a.microgrids, b.microgrids);
  EXPECT_EQ(a.transfers, b.transfers);
  EXPECT_EQ(a.reciprocity, b.reciprocity);
}

TEST(Run, SeedOverrideChangesDemand) {
  auto sc = small(1440);
  auto mg = microgrid("a", std::vector<Wh>(1440, 5));
  mg.households.push_back({"h1", appliance_catalog(), {}});
  sc.microgrids.push_back(mg);
  const auto a = run(sc, 1);
  const auto b = run(sc, 2);
  EXPECT_EQ(a.config.seed, 1u);
  EXPECT_NE(a.microgrids[0].requests, b.microgrids[0].requests);
}

TEST(Run, InvalidScenarioIsAConfigError) {
  auto sc = small();
  sc.microgrids.push_back(microgrid("a", std::vector<Wh>(59, 0)));
  EXPECT_THROW(run(sc), ConfigError);
}

TEST(Run, FixedRequestIdsPrecedeGeneratedOnes) {
  auto sc = small(1440);
  auto mg = microgrid("a", std::vector<Wh>(1440, 50));
  mg.requests = {fixed("x", LoadClass::Interruptible, 2, 100, 200), fixed("x", LoadClass::Interruptible, 2, 0, 10)};
  mg.households.push_back({"h1", appliance_catalog(), {}});
  sc.microgrids.push_back(mg);
  const auto r = run(sc);
  std::map<RequestId, const PacketRequest*> by_id;
  for (const auto& q : r.microgrids[0].requests) by_id[q.request_id] = &q;
  ASSERT_TRUE(by_id.count(0));
  ASSERT_TRUE(by_id.count(1));
  EXPECT_EQ(by_id[0]->earliest_start, 100);
  EXPECT_EQ(by_id[1]->earliest_start, 0);
  EXPECT_EQ(by_id.size(), r.microgrids[0].requests.size());
}

TEST(Uncoordinated, AmpleSupplyServesTheSameEnergy) {
  auto sc = small(1440);
  auto mg = microgrid("a", std::vector<Wh>(1440, 100000));
  mg.households.push_back({"h1", appliance_catalog(), {}});
  sc.microgrids.push_back(mg);
  const auto commons = run(sc);
  const auto baseline = run_uncoordinated(sc);
  EXPECT_EQ(baseline.config.mode, Mode::Uncoordinated);
  EXPECT_EQ(total_consumption(commons), total_consumption(baseline));
  EXPECT_EQ(baseline.metrics.community.unserved_energy_wh, 0);
}

TEST(Uncoordinated, NoSupplyLeavesAllDemandUnserved) {
  auto sc = small(1440);
  auto mg = microgrid("a", std::vector<Wh>(1440, 0));
  mg.households.push_back({"h1", appliance_catalog(), {}});
  sc.microgrids.push_back(mg);
  for (const auto& r : {run(sc), run_uncoordinated(sc)}) {
    const auto& m = r.metrics.community;
    EXPECT_EQ(m.unserved_energy_wh, m.requested_packets * sc.packet_size_wh);
    EXPECT_EQ(total_consumption(r), 0);
  }
}

TEST(Uncoordinated, NeverTransfers) {
  const auto sc = shifted_generation_scenario(3);
  const auto r = run_uncoordinated(sc);
  EXPECT_TRUE(r.transfers.empty());
  for (const auto& m : r.metrics.microgrids) {
    EXPECT_EQ(m.imports_wh, 0);
    EXPECT_EQ(m.exports_wh, 0);
  }
}

TEST(Uncoordinated, SharingHeavyScenarioLeavesMoreUnserved) {
  const auto sc = shifted_generation_scenario(0);
  EXPECT_LE(run(sc).metrics.community.unserved_energy_wh,
            run_uncoordinated(sc).metrics.community.unserved_energy_wh);
}

TEST(WithoutDeferral, PinsRequestsToTheirStart) {
  PacketRequest r = fixed("h", LoadClass::Interruptible, 4, 10, 50);
  EXPECT_EQ(without_deferral(r).deadline, 10);
  r.load_class = LoadClass::Uninterruptible;
  EXPECT_EQ(without_deferral(r).deadline, 13);
}

TEST(Isolation, NoLinksMatchesStandaloneRuns) {
  auto sc = fuzz_scenario(4);
  sc.links.clear();
  const auto joint = run(sc);
  for (std::size_t m = 0; m < sc.microgrids.size(); ++m) {
    Scenario alone = sc;
    alone.microgrids = {sc.microgrids[m]};
    alone.participation.clear();
    const auto single = run(alone);
    EXPECT_EQ(single.microgrids[0], joint.microgrids[m]);
  }
  EXPECT_TRUE(joint.transfers.empty());
}

TEST(Audit, CleanRunHasNoFindings) {
  for (std::uint64_t s = 0; s < 5; ++s) EXPECT_TRUE(audit_run(run(fuzz_scenario(s))).empty()) << "seed " << s;
}
