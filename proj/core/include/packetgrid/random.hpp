#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace packetgrid {

/// Stream seed for one (scenario seed, household, day) triple. Stable across
/// platforms and independent of the order in which streams are created.
std::uint64_t derive_seed(std::uint64_t scenario_seed, std::string_view household_id, std::uint64_t day_index);

/// mt19937_64 with a bounded integer draw whose output does not depend on the
/// standard library's distribution implementation.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi]; requires lo <= hi.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);

  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace packetgrid
