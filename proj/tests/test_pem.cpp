#include <gtest/gtest.h>

#include <algorithm>

#include "packetgrid/errors.hpp"
#include "packetgrid/pem.hpp"

using namespace packetgrid;

namespace {

RequestSpec spec(LoadClass cls, Wh total, Slot start, Slot deadline) {
  RequestSpec s;
  s.device_id = "dev";
  s.load_class = cls;
  s.total_wh = total;
  s.earliest_start = start;
  s.deadline = deadline;
  s.arrival_slot = start;
  return s;
}

bool has_code(const std::vector<Violation>& v, const std::string& code) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.code == code; });
}

}  // namespace

TEST(QuantizeDemand, RoundsUpToWholePackets) {
  EXPECT_EQ(quantize_demand(1000, 10), 100);
  EXPECT_EQ(quantize_demand(0, 10), 0);
  EXPECT_EQ(quantize_demand(1005, 10), 101);
}

TEST(QuantizeDemand, ZeroPacketSizeIsAConfigError) {
  EXPECT_THROW(quantize_demand(100, 0), ConfigError);
  EXPECT_THROW(quantize_demand(100, -5), ConfigError);
}

TEST(MakeRequest, DishwasherNeedsContiguousBlock) {
  auto s = spec(LoadClass::Uninterruptible, 600, 100, 189);
  s.device_id = "dishwasher";
  const auto r = make_request(s, 10);
  EXPECT_EQ(r.packet_count, 60);
  EXPECT_EQ(r.window_length(), 90);
  EXPECT_EQ(r.load_class, LoadClass::Uninterruptible);
  EXPECT_TRUE(validate_request(r).empty());
}

TEST(MakeRequest, SpaceHeaterIsPausable) {
  const auto r = make_request(spec(LoadClass::Interruptible, 300, 0, 299), 10);
  EXPECT_EQ(r.packet_count, 30);
  EXPECT_EQ(r.load_class, LoadClass::Interruptible);
}

TEST(MakeRequest, SingleSlotWindowCannotHoldTwoContiguousPackets) {
  EXPECT_THROW(make_request(spec(LoadClass::Uninterruptible, 20, 5, 5), 10), InfeasibleRequestError);
}

TEST(MakeRequest, EmptyWindowOrNoDemandIsAConfigError) {
  EXPECT_THROW(make_request(spec(LoadClass::Interruptible, 20, 6, 5), 10), ConfigError);
  EXPECT_THROW(make_request(spec(LoadClass::Interruptible, 0, 0, 5), 10), ConfigError);
}

TEST(ValidateRequest, WellFormedIsOk) {
  PacketRequest r;
  r.packet_count = 3;
  r.earliest_start = 2;
  r.deadline = 10;
  r.arrival_slot = 1;
  EXPECT_TRUE(validate_request(r).empty());
}

TEST(ValidateRequest, ReportsEmptyWindow) {
  PacketRequest r;
  r.packet_count = 1;
  r.earliest_start = 5;
  r.deadline = 4;
  r.arrival_slot = 5;
  EXPECT_TRUE(has_code(validate_request(r), "empty window"));
}

TEST(ValidateRequest, ReportsBlockThatCannotFit) {
  PacketRequest r;
  r.load_class = LoadClass::Uninterruptible;
  r.packet_count = 5;
  r.earliest_start = 0;
  r.deadline = 2;
  EXPECT_TRUE(has_code(validate_request(r), "contiguous block cannot fit"));
}

TEST(ValidateRequest, ReportsEveryViolation) {
  PacketRequest r;
  r.load_class = LoadClass::Uninterruptible;
  r.packet_count = 0;
  r.earliest_start = 3;
  r.deadline = 1;
  r.arrival_slot = 4;
  const auto v = validate_request(r);
  EXPECT_TRUE(has_code(v, "empty window"));
  EXPECT_TRUE(has_code(v, "non-positive packet count"));
  EXPECT_TRUE(has_code(v, "arrival after earliest start"));
}

TEST(MakePacket, UsesConfiguredSizeAndOneSlot) {
  const auto p = make_packet(25, "pv", "house");
  EXPECT_EQ(p.size_wh, 25);
  EXPECT_EQ(p.duration_slots, 1);
  EXPECT_THROW(make_packet(0, "a", "b"), ConfigError);
}
