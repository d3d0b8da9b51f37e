#pragma once

#include <compare>
#include <cstdint>
#include <ostream>

namespace tmncell {

/// Non-negative mass in whole milligrams. Arithmetic is exact; a subtraction
/// that would go below zero throws instead of clamping.
class Mass {
public:
  constexpr Mass() = default;
  explicit Mass(std::int64_t milligrams);

  static Mass grams_tenths(std::int64_t tenths) { return Mass{tenths * 100}; }

  constexpr std::int64_t mg() const noexcept { return mg_; }
  constexpr bool is_zero() const noexcept { return mg_ == 0; }

  Mass operator+(Mass other) const;
  Mass operator-(Mass other) const;
  Mass& operator+=(Mass other);
  Mass& operator-=(Mass other);
  Mass operator*(std::int64_t k) const;

  constexpr auto operator<=>(const Mass&) const = default;

private:
  std::int64_t mg_ = 0;
};

std::ostream& operator<<(std::ostream& os, Mass m);

/// Discrete sample index n >= 0. Wall-clock time is n * T.
struct SampleIndex {
  std::uint64_t value = 0;

  constexpr auto operator<=>(const SampleIndex&) const = default;
  constexpr SampleIndex next() const noexcept { return SampleIndex{value + 1}; }
};

/// Unit impulse: 1 iff n == n0.
constexpr int kronecker_delta(SampleIndex n, SampleIndex n0) noexcept {
  return n == n0 ? 1 : 0;
}

} // namespace tmncell
