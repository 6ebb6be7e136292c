#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "oracles.hpp"
#include "packetgrid/errors.hpp"
#include "packetgrid/generators.hpp"
#include "packetgrid/hems.hpp"

using namespace packetgrid;

namespace {

ApplianceSpec appliance(const std::string& id, LoadClass cls, int prio, Wh energy, std::int64_t per_day,
                        Slot window) {
  ApplianceSpec a;
  a.device_id = id;
  a.load_class = cls;
  a.priority = Priority{static_cast<std::uint8_t>(prio)};
  a.energy_per_activation_wh = energy;
  a.activations_per_day = per_day;
  a.flexibility_window_slots = window;
  return a;
}

HouseholdProfile household(std::vector<ApplianceSpec> apps, std::vector<std::string> pref = {}) {
  return HouseholdProfile{"h1", std::move(apps), std::move(pref)};
}

const DayFrame kDay{0, 0, 1440};

}  // namespace

TEST(CollectDemands, NoActivationsNoEvents) {
  RngStream rng(1);
  const auto hh = household({appliance("tv", LoadClass::Interruptible, 10, 50, 0, 30)});
  EXPECT_TRUE(collect_demands(hh, kDay, rng).empty());
}

TEST(CollectDemands, OneEventPerActivation) {
  RngStream rng(1);
  const auto hh = household({appliance("heater", LoadClass::Interruptible, 10, 300, 2, 60)});
  const auto events = collect_demands(hh, kDay, rng);
  ASSERT_EQ(events.size(), 2u);
  for (const auto& e : events) {
    EXPECT_EQ(e.device_id, "heater");
    EXPECT_EQ(e.energy_wh, 300);
    EXPECT_GE(e.desired_start_slot, 0);
    EXPECT_LE(e.desired_start_slot, 1440 - 60);
  }
}

TEST(CollectDemands, SameSeedSameEvents) {
  const auto hh = household(appliance_catalog());
  const DayFrame day{3, 3 * 1440, 1440};
  RngStream a(derive_seed(42, hh.household_id, 3));
  RngStream b(derive_seed(42, hh.household_id, 3));
  EXPECT_EQ(collect_demands(hh, day, a), collect_demands(hh, day, b));
  RngStream c(derive_seed(43, hh.household_id, 3));
  EXPECT_NE(collect_demands(hh, day, a), collect_demands(hh, day, c));
}

TEST(CollectDemands, StartsStayInsideTheDay) {
  const auto hh = household(appliance_catalog());
  const DayFrame day{2, 480, 240};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rng(seed);
    for (const auto& e : collect_demands(hh, day, rng)) {
      EXPECT_GE(e.desired_start_slot, day.first_slot);
      EXPECT_LE(e.desired_start_slot, day.last_slot());
    }
  }
}

TEST(DeriveSeed, DependsOnEveryComponent) {
  const auto s = derive_seed(7, "h1", 0);
  EXPECT_EQ(s, derive_seed(7, "h1", 0));
  EXPECT_NE(s, derive_seed(8, "h1", 0));
  EXPECT_NE(s, derive_seed(7, "h2", 0));
  EXPECT_NE(s, derive_seed(7, "h1", 1));
}

TEST(RngStream, UniformStaysInRange) {
  RngStream rng(9);
  std::map<std::int64_t, int> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.uniform(-2, 3);
    ASSERT_GE(v, -2);
    ASSERT_LE(v, 3);
    ++seen[v];
  }
  EXPECT_EQ(seen.size(), 6u);
  EXPECT_EQ(rng.uniform(5, 5), 5);
}

TEST(ClassifyAndAggregate, EmptyEventsEmptyProfile) {
  const auto p = classify_and_aggregate({}, household({}), 10, kDay);
  EXPECT_TRUE(p.requests.empty());
  EXPECT_EQ(p.household_id, "h1");
}

TEST(ClassifyAndAggregate, LaundryAheadOfEbikeAtSameSlot) {
  const auto hh = household({appliance("ebike", LoadClass::Interruptible, 100, 300, 1, 300),
                             appliance("laundry", LoadClass::Uninterruptible, 200, 600, 1, 240)});
  const std::vector<ActivationEvent> events{{"ebike", 100, 300}, {"laundry", 100, 600}};
  const auto p = classify_and_aggregate(events, hh, 10, kDay);
  ASSERT_EQ(p.requests.size(), 2u);
  EXPECT_EQ(p.requests[0].device_id, "laundry");
  EXPECT_EQ(p.requests[1].device_id, "ebike");
}

TEST(ClassifyAndAggregate, PreferenceOrderBreaksPriorityTies) {
  const auto hh = household({appliance("A", LoadClass::Interruptible, 50, 100, 1, 60),
                             appliance("B", LoadClass::Interruptible, 50, 100, 1, 60)},
                            {"B", "A"});
  const std::vector<ActivationEvent> events{{"A", 10, 100}, {"B", 10, 100}};
  const auto p = classify_and_aggregate(events, hh, 10, kDay);
  ASSERT_EQ(p.requests.size(), 2u);
  EXPECT_EQ(p.requests[0].device_id, "B");
  EXPECT_EQ(p.requests[1].device_id, "A");
}

TEST(ClassifyAndAggregate, WindowClippedToDayEndAndIdsSequential) {
  const auto hh = household({appliance("heater", LoadClass::Interruptible, 50, 95, 1, 100)});
  const std::vector<ActivationEvent> events{{"heater", 1400, 95}, {"heater", 5, 95}};
  const auto p = classify_and_aggregate(events, hh, 10, kDay, 40);
  ASSERT_EQ(p.requests.size(), 2u);
  EXPECT_EQ(p.requests[0].earliest_start, 5);
  EXPECT_EQ(p.requests[0].deadline, 104);
  EXPECT_EQ(p.requests[0].request_id, 40u);
  EXPECT_EQ(p.requests[1].earliest_start, 1400);
  EXPECT_EQ(p.requests[1].deadline, 1439);
  EXPECT_EQ(p.requests[1].request_id, 41u);
  EXPECT_EQ(p.requests[1].packet_count, 10);
}

TEST(ClassifyAndAggregate, ClippedUninterruptibleThatNoLongerFitsNamesHousehold) {
  const auto hh = household({appliance("dryer", LoadClass::Uninterruptible, 50, 300, 1, 60)});
  try {
    classify_and_aggregate({{"dryer", 1420, 300}}, hh, 10, kDay);
    FAIL() << "expected InfeasibleRequestError";
  } catch (const InfeasibleRequestError& e) {
    EXPECT_NE(std::string(e.what()).find("household h1"), std::string::npos);
  }
}

TEST(ValidateHousehold, FlagsDuplicatesShortWindowsAndUnknownPreferences) {
  const auto hh = household({appliance("a", LoadClass::Uninterruptible, 1, 100, 1, 5),
                             appliance("a", LoadClass::Interruptible, 1, 100, 1, 5)},
                            {"zzz"});
  const auto v = validate_household(hh, 10);
  auto has = [&](const std::string& code) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.code == code; });
  };
  EXPECT_TRUE(has("duplicate device"));
  EXPECT_TRUE(has("window too short"));
  EXPECT_TRUE(has("unknown preference device"));
}

TEST(UpdateForecast, SingleDayIsItself) {
  const std::vector<std::vector<Wh>> h{{1, 2, 3, 4}};
  EXPECT_EQ(update_forecast(h, 7, 4).per_slot_wh, (std::vector<Wh>{1, 2, 3, 4}));
}

TEST(UpdateForecast, MeanOfTwoDays) {
  const std::vector<std::vector<Wh>> h{{10}, {20}};
  EXPECT_EQ(update_forecast(h, 2, 1).per_slot_wh, (std::vector<Wh>{15}));
}

TEST(UpdateForecast, WindowKeepsTrailingDays) {
  const std::vector<std::vector<Wh>> h{{10}, {20}, {30}};
  const auto f = update_forecast(h, 2, 1);
  EXPECT_EQ(f.per_slot_wh[0], oracles::trailing_mean({10, 20, 30}, 2));
  EXPECT_EQ(f.per_slot_wh[0], 25);
  EXPECT_EQ(f.history_days_used, 2);
}

TEST(UpdateForecast, RoundsHalfUp) {
  const std::vector<std::vector<Wh>> h{{1, 0}, {2, 1}};
  EXPECT_EQ(update_forecast(h, 2, 2).per_slot_wh, (std::vector<Wh>{2, 1}));
}

TEST(UpdateForecast, EmptyHistoryIsAllZero) {
  const auto f = update_forecast({}, 7, 5);
  EXPECT_EQ(f.per_slot_wh, std::vector<Wh>(5, 0));
  EXPECT_EQ(f.history_days_used, 0);
}
