#pragma once

#include <cmath>
#include <cstdint>

namespace plasmaflow {

/// Nearest grid multiple of dt, rounding half up. Used to snap physical
/// transit times onto the simulation grid.
inline std::int64_t round_to_steps(double seconds, double dt) {
  return static_cast<std::int64_t>(std::floor(seconds / dt + 0.5));
}

/// Number of grid steps in `seconds`, or -1 if `seconds` is not a
/// nonnegative grid multiple to within 1e-9*dt.
inline std::int64_t exact_steps(double seconds, double dt) {
  const auto n = std::llround(seconds / dt);
  if (n < 0 || std::abs(seconds - static_cast<double>(n) * dt) > 1e-9 * dt) return -1;
  return n;
}

}  // namespace plasmaflow
