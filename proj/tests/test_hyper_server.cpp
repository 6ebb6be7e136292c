#include <gtest/gtest.h>

#include "oracles.hpp"
#include "packetgrid/errors.hpp"
#include "packetgrid/hyper_server.hpp"
#include "packetgrid/random.hpp"

using namespace packetgrid;

namespace {

Announcement deficit(const std::string& id, Wh wh) { return {id, 0, wh, 0}; }
Announcement surplus(const std::string& id, Wh wh) { return {id, 0, 0, wh}; }

InterconnectLink link(const std::string& a, const std::string& b, Wh cap, Rational loss = Rational(0, 1)) {
  return {a + "-" + b, a, b, cap, loss};
}

Wh total_received(const std::vector<Transfer>& ts) {
  Wh r = 0;
  for (const auto& t : ts) r += t.received_wh;
  return r;
}

}  // namespace

TEST(Match, SingleDeficitSingleSurplus) {
  const std::vector<Announcement> ann{deficit("A", 20), surplus("B", 50)};
  const std::vector<InterconnectLink> links{link("A", "B", 100)};
  const auto ts = match(ann, links, {}, 0);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(ts[0].from_microgrid, "B");
  EXPECT_EQ(ts[0].to_microgrid, "A");
  EXPECT_EQ(ts[0].sent_wh, 20);
  EXPECT_EQ(ts[0].received_wh, 20);
  EXPECT_EQ(ts[0].loss_wh, 0);
}

TEST(Match, NoLinksNoTransfers) {
  const std::vector<Announcement> ann{deficit("A", 20), surplus("B", 50), surplus("C", 50)};
  EXPECT_TRUE(match(ann, {}, {}, 0).empty());
  const std::vector<InterconnectLink> unrelated{link("B", "C", 100)};
  EXPECT_TRUE(match(ann, unrelated, {}, 0).empty());
}

TEST(Match, MultiSourceFillsFromLargestSurplusFirst) {
  const std::vector<Announcement> ann{deficit("A", 30), surplus("B", 20), surplus("C", 15)};
  const std::vector<InterconnectLink> links{link("A", "B", 1000), link("A", "C", 1000)};
  const auto ts = match(ann, links, {}, 0);
  ASSERT_EQ(ts.size(), 2u);
  EXPECT_EQ(ts[0].from_microgrid, "B");
  EXPECT_EQ(ts[0].sent_wh, 20);
  EXPECT_EQ(ts[1].from_microgrid, "C");
  EXPECT_EQ(ts[1].sent_wh, 10);
  EXPECT_EQ(total_received(ts), oracles::best_received(30, {{20, 0, 1}, {15, 0, 1}}));
}

TEST(Match, GrossesUpForLosses) {
  const std::vector<Announcement> ann{deficit("A", 18), surplus("B", 100)};
  const std::vector<InterconnectLink> links{link("A", "B", 100, Rational(1, 10))};
  const auto ts = match(ann, links, {}, 0);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(ts[0].sent_wh, 20);
  EXPECT_EQ(ts[0].loss_wh, 2);
  EXPECT_EQ(ts[0].received_wh, 18);
}

TEST(Match, CappedByLinkCapacityInBothDirections) {
  const std::vector<Announcement> ann{deficit("A", 50), surplus("B", 100)};
  const std::vector<InterconnectLink> links{link("A", "B", 35)};
  const auto ts = match(ann, links, {}, 0);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(ts[0].sent_wh, 35);
}

TEST(Match, DuplicateAnnouncementIsAProtocolViolation) {
  const std::vector<Announcement> ann{deficit("A", 20), surplus("A", 5)};
  EXPECT_THROW(match(ann, {}, {}, 0), ProtocolViolation);
}

TEST(Match, ReceivedEqualsBruteForceOptimumForOneDeficit) {
  RngStream rng(2024);
  const Rational losses[] = {Rational(0, 1), Rational(1, 20), Rational(1, 10), Rational(1, 4), Rational(1, 3)};
  for (int iter = 0; iter < 300; ++iter) {
    const Wh need = rng.uniform(1, 40);
    const int n = static_cast<int>(rng.uniform(1, 3));
    std::vector<Announcement> ann{deficit("T", need)};
    std::vector<InterconnectLink> links;
    std::vector<oracles::Offer> offers;
    for (int g = 0; g < n; ++g) {
      const std::string id = "G" + std::to_string(g);
      const Wh s = rng.uniform(0, 25);
      const Wh cap = rng.uniform(0, 25);
      const Rational lf = losses[rng.uniform(0, 4)];
      ann.push_back(surplus(id, s));
      links.push_back(link("T", id, cap, lf));
      offers.push_back({std::min(s, cap), lf.num(), lf.den()});
    }
    const auto ts = match(ann, links, {}, 0);
    ASSERT_EQ(total_received(ts), oracles::best_received(need, offers)) << "iteration " << iter;
    ASSERT_LE(total_received(ts), need);
  }
}

TEST(DeficitServiceOrder, ContributorsFirstThenId) {
  ReciprocityLedger ledger;
  ledger.balance = {{"A", -5}, {"B", 40}, {"C", 40}, {"D", 0}};
  const std::vector<Announcement> ann{deficit("A", 1), deficit("B", 1), deficit("C", 1), surplus("D", 9)};
  EXPECT_EQ(deficit_service_order(ann, ledger), (std::vector<std::string>{"B", "C", "A"}));
}

TEST(TitForTat, ConstantShiftLeavesMatchUnchanged) {
  const std::vector<Announcement> ann{deficit("A", 40), deficit("B", 30), deficit("C", 25), surplus("D", 60),
                                      surplus("E", 20)};
  const std::vector<InterconnectLink> links{link("A", "D", 50), link("B", "D", 50), link("C", "D", 20),
                                            link("A", "E", 10), link("C", "E", 50)};
  ReciprocityLedger base;
  base.balance = {{"A", 10}, {"B", -20}, {"C", 35}, {"D", 0}, {"E", 5}};
  const auto reference = match(ann, links, base, 3);
  for (Wh shift : {-1000, -7, 1, 12345}) {
    ReciprocityLedger shifted = base;
    for (auto& [id, bal] : shifted.balance) bal += shift;
    EXPECT_EQ(match(ann, links, shifted, 3), reference) << "shift " << shift;
  }
}

TEST(TitForTat, SwappingBalancesSwapsServiceOrder) {
  // A and B are symmetric: same deficit, same link to the only giver.
  const std::vector<Announcement> ann{deficit("A", 30), deficit("B", 30), surplus("S", 40)};
  const std::vector<InterconnectLink> links{link("A", "S", 100), link("B", "S", 100)};
  ReciprocityLedger ledger;
  ledger.balance = {{"A", 50}, {"B", -50}};
  const auto first = match(ann, links, ledger, 0);
  std::swap(ledger.balance["A"], ledger.balance["B"]);
  const auto second = match(ann, links, ledger, 0);
  ASSERT_EQ(first.size(), 2u);
  ASSERT_EQ(second.size(), 2u);
  EXPECT_EQ(first[0].to_microgrid, "A");
  EXPECT_EQ(first[0].received_wh, 30);
  EXPECT_EQ(first[1].to_microgrid, "B");
  EXPECT_EQ(first[1].received_wh, 10);
  EXPECT_EQ(second[0].to_microgrid, "B");
  EXPECT_EQ(second[0].received_wh, 30);
  EXPECT_EQ(second[1].to_microgrid, "A");
  EXPECT_EQ(second[1].received_wh, 10);
}

TEST(Settle, EmptyIsAllZero) {
  const auto s = settle({}, {}, 0);
  EXPECT_TRUE(s.flows.empty());
  EXPECT_TRUE(s.link_usage.empty());
}

TEST(Settle, ExactlyAtCapacityIsAccepted) {
  const std::vector<InterconnectLink> links{link("A", "B", 30)};
  const std::vector<Transfer> ts{{0, "A", "B", "A-B", 20, 20, 0}, {0, "B", "A", "A-B", 10, 10, 0}};
  const auto s = settle(ts, links, 0);
  EXPECT_EQ(s.flows.at("A").outgoing_wh, 20);
  EXPECT_EQ(s.flows.at("A").incoming_wh, 10);
  ASSERT_EQ(s.link_usage.size(), 1u);
  EXPECT_EQ(s.link_usage[0].used_wh, 30);
}

TEST(Settle, OverCapacityAborts) {
  const std::vector<InterconnectLink> links{link("A", "B", 30)};
  const std::vector<Transfer> ts{{0, "A", "B", "A-B", 31, 31, 0}};
  EXPECT_THROW(settle(ts, links, 0), InvariantFailure);
}

TEST(Settle, MissingLinkOrBadLossArithmeticAborts) {
  const std::vector<InterconnectLink> links{link("A", "B", 100, Rational(1, 10))};
  EXPECT_THROW(settle(std::vector<Transfer>{{0, "A", "C", "x", 5, 5, 0}}, links, 0), InvariantFailure);
  EXPECT_THROW(settle(std::vector<Transfer>{{0, "A", "B", "A-B", 20, 19, 1}}, links, 0), InvariantFailure);
}

TEST(UpdateReciprocity, SenderGainsReceiverLosesSent) {
  ReciprocityLedger ledger;
  update_reciprocity(ledger, std::vector<Transfer>{{0, "A", "B", "A-B", 20, 18, 2}});
  EXPECT_EQ(ledger.of("A"), 20);
  EXPECT_EQ(ledger.of("B"), -20);
  const auto before = ledger;
  update_reciprocity(ledger, {});
  EXPECT_EQ(ledger, before);
}

TEST(HyperServer, OptOutTakesEffectNextSlot) {
  HyperServer hs({"A", "B"}, {link("A", "B", 100)});
  const std::vector<Announcement> ann{deficit("A", 10), surplus("B", 10)};
  hs.register_microgrid("A", false, 4);
  EXPECT_TRUE(hs.participates("A", 4));
  EXPECT_FALSE(hs.participates("A", 5));
  EXPECT_EQ(hs.run_slot(ann, 4).flows.size(), 2u);
  EXPECT_TRUE(hs.run_slot(ann, 5).flows.empty());
  hs.register_microgrid("A", true, 5);
  EXPECT_EQ(hs.run_slot(ann, 6).flows.size(), 2u);
  EXPECT_EQ(hs.transfers().size(), 2u);
  EXPECT_EQ(hs.ledger().of("B"), 20);
}

TEST(HyperServer, UnknownMicrogridIsAConfigError) {
  HyperServer hs({"A"}, {});
  EXPECT_THROW(hs.register_microgrid("Z", true, 0), ConfigError);
}

TEST(ValidateLinks, RejectsBadTopology) {
  const std::vector<std::string> ids{"A", "B"};
  EXPECT_THROW(validate_links(std::vector<InterconnectLink>{link("A", "A", 1)}, ids), ConfigError);
  EXPECT_THROW(validate_links(std::vector<InterconnectLink>{link("A", "Z", 1)}, ids), ConfigError);
  EXPECT_THROW(validate_links(std::vector<InterconnectLink>{link("A", "B", 1), {"x", "B", "A", 1, {}}}, ids),
               ConfigError);
  EXPECT_THROW(validate_links(std::vector<InterconnectLink>{link("A", "B", 1, Rational(1, 1))}, ids), ConfigError);
  EXPECT_NO_THROW(validate_links(std::vector<InterconnectLink>{link("A", "B", 0)}, ids));
}
