#pragma once

#include <cstdint>
#include <vector>

#include "plasmaflow/errors.hpp"
#include "plasmaflow/grid.hpp"

namespace plasmaflow {

/// Ring buffer of the most recent samples of a signal on a uniform time
/// grid. Lookups at grid-aligned lags are exact array reads; nothing is
/// interpolated. Memory is O(max_lag/dt) regardless of how long a
/// simulation runs.
class HistoryBuffer {
 public:
  /// Buffer spanning [0, max_lag], prefilled with `initial_value`;
  /// head_time starts at max_lag. max_lag must be a positive grid multiple.
  HistoryBuffer(double dt, double max_lag, double initial_value)
      : HistoryBuffer(dt, checked_lag_steps(dt, max_lag), initial_value) {}

  static HistoryBuffer with_lag_steps(double dt, std::int64_t lag_steps, double initial_value) {
    if (!(dt > 0.0)) throw NonPositiveParameter("dt", dt);
    if (lag_steps < 1) throw LagNotOnGrid(static_cast<double>(lag_steps) * dt, dt);
    return HistoryBuffer(dt, lag_steps, initial_value);
  }

  /// Commits the sample at head_time + dt and evicts the oldest one.
  void push(double value) {
    head_idx_ = (head_idx_ + 1 == ring_.size()) ? 0 : head_idx_ + 1;
    ring_[head_idx_] = value;
    head_time_ += dt_;
  }

  /// Exact stored sample at head_time - lag. The lag must be a grid
  /// multiple within the retained window.
  double lookup(double lag) const {
    const std::int64_t n = exact_steps(lag, dt_);
    if (n < 0) throw LagNotOnGrid(lag, dt_);
    return value_at_steps(n);
  }

  /// Sample `steps_back` grid steps before the head (0 = head itself).
  double value_at_steps(std::int64_t steps_back) const {
    if (steps_back < 0 || steps_back >= static_cast<std::int64_t>(ring_.size()))
      throw LagExceedsWindow(static_cast<double>(steps_back) * dt_, max_lag());
    const auto n = static_cast<std::size_t>(steps_back);
    return ring_[head_idx_ >= n ? head_idx_ - n : head_idx_ + ring_.size() - n];
  }

  double head() const { return ring_[head_idx_]; }
  double head_time() const { return head_time_; }
  double dt() const { return dt_; }
  double max_lag() const { return static_cast<double>(ring_.size() - 1) * dt_; }
  /// Number of retained samples (max lag in steps + 1).
  std::int64_t capacity() const { return static_cast<std::int64_t>(ring_.size()); }

 private:
  // lag_steps >= 1 and dt > 0 are guaranteed by the public entry points.
  HistoryBuffer(double dt, std::int64_t lag_steps, double initial_value)
      : dt_(dt),
        head_time_(static_cast<double>(lag_steps) * dt),
        ring_(static_cast<std::size_t>(lag_steps) + 1, initial_value),
        head_idx_(static_cast<std::size_t>(lag_steps)) {}

  static std::int64_t checked_lag_steps(double dt, double max_lag) {
    if (!(dt > 0.0)) throw NonPositiveParameter("dt", dt);
    const std::int64_t n = exact_steps(max_lag, dt);
    if (n < 1) throw LagNotOnGrid(max_lag, dt);
    return n;
  }

  double dt_;
  double head_time_;
  std::vector<double> ring_;
  std::size_t head_idx_;
};

}  // namespace plasmaflow
