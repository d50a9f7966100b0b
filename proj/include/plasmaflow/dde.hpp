#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "plasmaflow/history_buffer.hpp"
#include "plasmaflow/kinetics.hpp"
#include "plasmaflow/time_series.hpp"

namespace plasmaflow {

struct DdeDerivatives {
  double dgamma1;  ///< 1/s
  double dgamma2;  ///< 1/s
};

/// Right-hand sides of the two-compartment balance, divided through by the
/// compartment volumes (volumes are constant, so d/dt(V_i g_i) = V_i g_i').
///
/// The ECMO limb draws aq*g2 from the native circulation and returns
/// b + c*g2(t - s3): the device exchanges plasma at rate b while the
/// bypassing fraction c recirculates what entered the limb s3 seconds
/// earlier.
///
///   VA:  V1 g1' = (Q - aQ)(g2 - g1)
///        V2 g2' = (Q - aQ) g1 + b + c g2(t - s3) - Q g2
///   VV:  V1 g1' = (Q - aQ) g2 + b + c g2(t - s3) - Q g1
///        V2 g2' = Q (g1 - g2)
///
/// The limb imbalance is grouped as b(1 - g2d) + aq(g2d - g2), which keeps
/// gamma = 1 an exact equilibrium and drops alpha bit-for-bit when s3 = 0.
inline DdeDerivatives dde_rhs(double gamma1, double gamma2, double gamma2_delayed,
                              const DerivedQuantities& q, const ModelConfiguration& cfg,
                              const ModelParameters& p) {
  const double limb = q.b * (1.0 - gamma2_delayed) + q.aq * (gamma2_delayed - gamma2);
  if (cfg.ecmo_mode == EcmoMode::VA) {
    const double native = p.Q - q.aq;
    return {native * (gamma2 - gamma1) / q.v1, (limb + native * (gamma1 - gamma2)) / q.v2};
  }
  return {(limb + p.Q * (gamma2 - gamma1)) / q.v1, p.Q * (gamma1 - gamma2) / q.v2};
}

struct DdeState {
  HistoryBuffer gamma1;
  HistoryBuffer gamma2;
  DerivedQuantities q;
  ModelConfiguration cfg;
  ModelParameters p;
  std::int64_t s3_steps;  ///< delay lag on the integration grid
  double dt;
  double time;  ///< left endpoint of the next Euler step, s
};

inline DdeState make_dde_state(const ModelParameters& p, const ModelConfiguration& cfg,
                               const DerivedQuantities& q, double dt,
                               double initial_value = 0.0) {
  const std::int64_t window = detail::steps_on_grid(q.window(), dt);
  const std::int64_t s3 = detail::steps_on_grid(q.s3, dt);
  return DdeState{HistoryBuffer::with_lag_steps(dt, window, initial_value),
                  HistoryBuffer::with_lag_steps(dt, window, initial_value),
                  q,
                  cfg,
                  p,
                  s3,
                  dt,
                  static_cast<double>(window) * dt};
}

/// One forward Euler step. The delayed term is read at the left endpoint:
/// gamma2(t - s3) with t the current buffer head.
inline void dde_step(DdeState& s) {
  const double g1 = s.gamma1.head();
  const double g2 = s.gamma2.head();
  const double g2_delayed = s.gamma2.value_at_steps(s.s3_steps);
  const DdeDerivatives d = dde_rhs(g1, g2, g2_delayed, s.q, s.cfg, s.p);
  s.gamma1.push(g1 + s.dt * d.dgamma1);
  s.gamma2.push(g2 + s.dt * d.dgamma2);
  s.time += s.dt;
}

/// Integrates the delay system by forward Euler from constant history over
/// [0, s1 + s2 + s3], sampling both fractions at every dt.
inline TimeSeries simulate_dde(const ModelParameters& p, const ModelConfiguration& cfg,
                               const DerivedQuantities& q, double duration, double dt,
                               double initial_value = 0.0) {
  if (cfg.model_kind != ModelKind::DDE)
    throw std::invalid_argument("simulate_dde: configuration selects the ADE model");

  const double ratio = dt * p.Q / std::min(q.v1, q.v2);
  if (!(ratio < 2.0)) throw StabilityGuardViolated(dt, ratio);

  DdeState state = make_dde_state(p, cfg, q, dt, initial_value);
  const auto last = static_cast<std::int64_t>(std::floor(duration / dt + 1e-9));
  const std::int64_t window = state.gamma1.capacity() - 1;
  if (last <= window)
    throw std::invalid_argument("simulate_dde: duration must exceed the initial window of " +
                                std::to_string(q.window()) + " s");

  TimeSeries ts;
  ts.dt = dt;
  ts.gamma1.reserve(static_cast<std::size_t>(last) + 1);
  ts.gamma2.reserve(static_cast<std::size_t>(last) + 1);
  ts.gamma1.assign(static_cast<std::size_t>(window) + 1, initial_value);
  ts.gamma2.assign(static_cast<std::size_t>(window) + 1, initial_value);
  for (std::int64_t i = window; i < last; ++i) {
    dde_step(state);
    ts.gamma1.push_back(state.gamma1.head());
    ts.gamma2.push_back(state.gamma2.head());
  }
  return ts;
}

inline TimeSeries simulate_dde(const ModelParameters& p, const ModelConfiguration& cfg,
                               double duration, double dt, double initial_value = 0.0) {
  // Guard before lag rounding so that an absurd dt reports instability
  // rather than a rounding artifact. Volumes from the raw transit times.
  validate_parameters(p);
  const double aq = p.alpha * p.Q;
  const double v1_raw = (cfg.ecmo_mode == EcmoMode::VA) ? p.s1 * (p.Q - aq) : p.s1 * p.Q;
  const double ratio = dt * p.Q / std::min(v1_raw, p.s2 * p.Q);
  if (!(ratio < 2.0)) throw StabilityGuardViolated(dt, ratio);
  return simulate_dde(p, cfg, derive_quantities(p, cfg, dt), duration, dt, initial_value);
}

}  // namespace plasmaflow
