#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace packetgrid {

/// Non-negative exact fraction used for efficiencies, loss factors and cost
/// multipliers. Always stored reduced with a positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den);

  static Rational integer(std::int64_t v) { return Rational(v, 1); }

  /// Accepts "a/b", an integer, or a decimal literal such as "0.95".
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  // floor(v * this) and ceil(v * this) for v >= 0, computed without overflow
  // for the magnitudes used in the simulator.
  std::int64_t mul_floor(std::int64_t v) const;
  std::int64_t mul_ceil(std::int64_t v) const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace packetgrid
