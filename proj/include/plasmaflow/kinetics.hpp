#pragma once

#include <cstdint>

#include "plasmaflow/errors.hpp"
#include "plasmaflow/grid.hpp"

namespace plasmaflow {

enum class EcmoMode { VA, VV };
enum class PortMode { Typical, Switched };
enum class ModelKind { ADE, DDE };

inline const char* to_string(EcmoMode m) { return m == EcmoMode::VA ? "va" : "vv"; }
inline const char* to_string(PortMode m) { return m == PortMode::Typical ? "typical" : "switched"; }
inline const char* to_string(ModelKind m) { return m == ModelKind::ADE ? "ade" : "dde"; }

/// ECMO cannulation x TPE port orientation x model family. The 2x2x2 space
/// enumerates all eight model variants.
struct ModelConfiguration {
  EcmoMode ecmo_mode = EcmoMode::VA;
  PortMode port_mode = PortMode::Typical;
  ModelKind model_kind = ModelKind::DDE;
};

/// Clinical inputs. Flows in mL/s, times in s, volumes in mL.
///
/// alpha*Q is the blood flow through the ECMO circuit, and Q1 the draw of the
/// plasma exchange device teed into it. Valid inputs satisfy
/// Q1 < alpha*Q < Q: the device cannot draw more than flows past it, and the
/// circuit carries only a fraction of the cardiac output.
struct ModelParameters {
  double Q = 0.0;      ///< blood flow through the peripheral compartment
  double Q1 = 0.0;     ///< TPE device inlet/outlet flow
  double alpha = 0.0;  ///< fraction of Q carried by the ECMO circuit
  double s1 = 0.0;     ///< heart/lung compartment transit time
  double s2 = 0.0;     ///< peripheral compartment transit time
  double V3 = 0.0;     ///< ECMO circuit blood volume
};

/// Default clinical parameter set used throughout the examples and tests.
inline ModelParameters nominal_parameters() {
  return ModelParameters{116.7, 1.5, 0.7, 13.0, 39.0, 500.0};
}

/// Returns p unchanged iff all parameter invariants hold.
///
/// V3 = 0 is accepted as the degenerate instantaneous-ECMO-transit limit
/// (s3 = 0); everything else must be strictly positive.
inline const ModelParameters& validate_parameters(const ModelParameters& p) {
  const struct {
    const char* name;
    double value;
  } strictly_positive[] = {{"Q", p.Q}, {"Q1", p.Q1}, {"alpha", p.alpha}, {"s1", p.s1}, {"s2", p.s2}};
  for (const auto& f : strictly_positive)
    if (!(f.value > 0.0)) throw NonPositiveParameter(f.name, f.value);
  if (!(p.V3 >= 0.0)) throw NonPositiveParameter("V3", p.V3);

  const double alpha_q = p.alpha * p.Q;
  if (!(p.Q1 < alpha_q && alpha_q < p.Q)) throw FlowConstraintViolated(p.Q1, alpha_q, p.Q);
  return p;
}

/// Everything the solvers need that follows from parameters, configuration
/// and timestep. All lags are snapped onto the dt grid (round half up), and
/// the compartment volumes are computed from the snapped transit times so
/// that flows, volumes and lags stay mutually consistent.
struct DerivedQuantities {
  double v1 = 0.0;  ///< heart/lung compartment volume, mL
  double v2 = 0.0;  ///< peripheral compartment volume, mL
  double s1 = 0.0;  ///< heart/lung transit time on the grid, s
  double s2 = 0.0;  ///< peripheral transit time on the grid, s
  double s3 = 0.0;  ///< ECMO circuit transit time on the grid, s
  double b = 0.0;   ///< device constant-inflow coefficient, mL/s
  double c = 0.0;   ///< device delayed-recirculation coefficient, mL/s
  double k = 0.0;   ///< constant term of the algebraic recurrence, = b/Q
  double aq = 0.0;  ///< ECMO limb flow alpha*Q, mL/s
  double d_a = 0.0;  ///< recurrence delay through the device path, s
  double d_b = 0.0;  ///< recurrence delay through the native path, s
  double dt = 0.0;   ///< grid spacing the lags were snapped to, s

  std::int64_t s1_steps = 0;
  std::int64_t s2_steps = 0;
  std::int64_t s3_steps = 0;
  std::int64_t da_steps = 0;
  std::int64_t db_steps = 0;
  std::int64_t window_steps = 0;  ///< quiescent initial window s1+s2+s3, in steps

  bool s1_snapped = false;  ///< s1 was not already a grid multiple
  bool s2_snapped = false;

  double window() const { return static_cast<double>(window_steps) * dt; }
};

/// Derives volumes, the ECMO transit time, the unified device coefficients
/// and the recurrence delays for one configuration.
///
/// Coefficients: in the typical orientation the device replaces plasma at
/// its full draw, b = Q1, and the bypassing limb flow c = alpha*Q - Q1
/// recirculates with delay s3. Switching the ports makes the device re-draw
/// part of its own output, which shrinks the effective exchange rate to
/// b = alpha*Q*Q1/(Q1 + alpha*Q) with c = (alpha*Q)^2/(Q1 + alpha*Q).
/// Either way b + c = alpha*Q.
inline DerivedQuantities derive_quantities(const ModelParameters& p, const ModelConfiguration& cfg,
                                           double dt) {
  validate_parameters(p);
  if (!(dt > 0.0)) throw NonPositiveParameter("dt", dt);

  DerivedQuantities q;
  q.dt = dt;
  q.s1_steps = round_to_steps(p.s1, dt);
  q.s2_steps = round_to_steps(p.s2, dt);
  if (q.s1_steps == 0) throw ZeroLagAfterRounding("s1", p.s1, dt);
  if (q.s2_steps == 0) throw ZeroLagAfterRounding("s2", p.s2, dt);
  q.s1 = static_cast<double>(q.s1_steps) * dt;
  q.s2 = static_cast<double>(q.s2_steps) * dt;
  q.s1_snapped = exact_steps(p.s1, dt) < 0;
  q.s2_snapped = exact_steps(p.s2, dt) < 0;

  q.aq = p.alpha * p.Q;
  const double s3_exact = p.V3 / q.aq;
  q.s3_steps = round_to_steps(s3_exact, dt);
  if (p.V3 > 0.0 && q.s3_steps == 0) throw ZeroLagAfterRounding("s3", s3_exact, dt);
  q.s3 = static_cast<double>(q.s3_steps) * dt;

  // VA bypasses the heart/lung compartment, so only the native fraction of
  // the flow transits it; VV returns upstream of it and the full flow does.
  q.v1 = (cfg.ecmo_mode == EcmoMode::VA) ? q.s1 * (p.Q - q.aq) : q.s1 * p.Q;
  q.v2 = q.s2 * p.Q;

  if (cfg.port_mode == PortMode::Typical) {
    q.b = p.Q1;
    q.c = q.aq - p.Q1;
  } else {
    q.b = q.aq * p.Q1 / (p.Q1 + q.aq);
    q.c = q.aq * q.aq / (p.Q1 + q.aq);
  }
  q.k = q.b / p.Q;

  q.da_steps = (cfg.ecmo_mode == EcmoMode::VA) ? q.s2_steps + q.s3_steps
                                               : q.s1_steps + q.s2_steps + q.s3_steps;
  q.db_steps = q.s1_steps + q.s2_steps;
  q.d_a = static_cast<double>(q.da_steps) * dt;
  q.d_b = static_cast<double>(q.db_steps) * dt;
  q.window_steps = q.s1_steps + q.s2_steps + q.s3_steps;
  return q;
}

}  // namespace plasmaflow
