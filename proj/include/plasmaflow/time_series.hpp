#pragma once

#include <cstdint>
#include <vector>

namespace plasmaflow {

/// Uniformly sampled trajectory of new-plasma fractions. gamma2 stays empty
/// for outputs of the algebraic model, which tracks gamma1 only.
struct TimeSeries {
  double dt = 0.0;
  double start_time = 0.0;
  std::vector<double> gamma1;
  std::vector<double> gamma2;

  bool has_gamma2() const { return !gamma2.empty(); }
  std::size_t size() const { return gamma1.size(); }
  double time_at(std::size_t i) const { return start_time + static_cast<double>(i) * dt; }
};

}  // namespace plasmaflow
