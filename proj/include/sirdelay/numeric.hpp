#pragma once

#include <algorithm>
#include <cmath>

namespace sirdelay {

/// Inequalities closer than this (relative to the operand scale) count as equalities.
inline constexpr double kEqualityBand = 1e-12;

inline bool nearly_equal(double a, double b, double band = kEqualityBand) {
  return std::abs(a - b) <= band * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace sirdelay
