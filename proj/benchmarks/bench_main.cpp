#include <benchmark/benchmark.h>

#include <random>

#include "packetgrid/engine.hpp"
#include "packetgrid/generators.hpp"
#include "packetgrid/hyper_server.hpp"
#include "packetgrid/scheduler.hpp"

using namespace packetgrid;

namespace {

std::vector<QueuedRequest> random_queue(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_int_distribution<int> prio(0, 3);
  std::uniform_int_distribution<std::int64_t> packets(1, 60);
  std::uniform_int_distribution<Slot> slack(0, 300);
  std::vector<QueuedRequest> q;
  for (std::size_t i = 0; i < n; ++i) {
    QueuedRequest r;
    r.request_id = i;
    r.load_class = i % 3 == 0 ? LoadClass::Uninterruptible : LoadClass::Interruptible;
    r.priority = Priority{static_cast<std::uint8_t>(50 * prio(g))};
    r.packet_count = packets(g);
    r.remaining = r.packet_count;
    r.earliest_start = 0;
    r.deadline = r.packet_count + slack(g);
    q.push_back(r);
  }
  return q;
}

void BM_ScheduleSlot(benchmark::State& state) {
  const auto queue = random_queue(static_cast<std::size_t>(state.range(0)), 1);
  const std::int64_t capacity = state.range(0) / 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(schedule_slot_packets(queue, capacity, 0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScheduleSlot)->RangeMultiplier(4)->Range(16, 4096);

void BM_Match(benchmark::State& state) {
  const auto n = state.range(0);
  std::mt19937_64 g(2);
  std::uniform_int_distribution<Wh> amount(0, 500);
  std::vector<Announcement> ann;
  std::vector<InterconnectLink> links;
  ReciprocityLedger ledger;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::string id = "m" + std::to_string(i);
    ann.push_back(i % 2 ? Announcement{id, 0, amount(g), 0} : Announcement{id, 0, 0, amount(g)});
    ledger.balance[id] = amount(g) - 250;
    for (std::int64_t j = 0; j < i; ++j) {
      links.push_back({id + "-m" + std::to_string(j), id, "m" + std::to_string(j), 200, Rational(1, 20)});
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(match(ann, links, ledger, 0));
  }
}
BENCHMARK(BM_Match)->Arg(4)->Arg(10)->Arg(30);

void BM_DeskScaleRun(benchmark::State& state) {
  const auto sc = desk_scale_scenario(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(sc));
  }
}
BENCHMARK(BM_DeskScaleRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
