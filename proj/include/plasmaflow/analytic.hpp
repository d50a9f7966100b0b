#pragma once

#include <cmath>

#include "plasmaflow/kinetics.hpp"

namespace plasmaflow {

/// Flow effectively exchanged by the device once port orientation is
/// accounted for. Switching the ports makes the device re-draw a slice of
/// its own output, so beta_switched = aq*Q1/(aq + Q1) < Q1; the penalty
/// vanishes when aq >> Q1.
inline double lumped_beta(const ModelParameters& p, PortMode port_mode) {
  if (port_mode == PortMode::Typical) return p.Q1;
  const double aq = p.alpha * p.Q;
  return aq * p.Q1 / (aq + p.Q1);
}

/// Native blood volume V1 + V2 entering the single-compartment reduction.
/// The reduction is derived for VV; passing VA extrapolates it with the VA
/// volume relations and is outside the validated regime.
inline double lumped_native_volume(const ModelParameters& p, EcmoMode ecmo_mode) {
  if (ecmo_mode == EcmoMode::VV) return (p.s1 + p.s2) * p.Q;
  return p.s1 * (p.Q - p.alpha * p.Q) + p.s2 * p.Q;
}

/// Single-compartment reduction of the two-compartment models: both native
/// compartments merged (gamma1 = gamma2) and instantaneous ECMO transit
/// (s3 = 0), leaving (V1 + V2) gamma' = beta (1 - gamma).
struct LumpedModel {
  double native_volume;  ///< V1 + V2, mL
  double beta;           ///< effective exchange flow, mL/s
  PortMode port_mode;
};

inline LumpedModel make_lumped_model(const ModelParameters& p, EcmoMode ecmo_mode,
                                     PortMode port_mode) {
  return {lumped_native_volume(p, ecmo_mode), lumped_beta(p, port_mode), port_mode};
}

/// Closed-form solution gamma2(t) = 1 - exp(-beta t / (V1 + V2)).
inline double lumped_solution(const ModelParameters& p, EcmoMode ecmo_mode, PortMode port_mode,
                              double t) {
  return -std::expm1(-lumped_beta(p, port_mode) * t / lumped_native_volume(p, ecmo_mode));
}

/// Device throughput Q1*t measured in multiples of the native blood volume
/// (VV volume relations).
inline double plasma_volumes_processed(const ModelParameters& p, double t) {
  return p.Q1 * t / lumped_native_volume(p, EcmoMode::VV);
}

/// Exponential-washout law: old plasma decays in the number of plasma
/// volumes processed. Port switching degrades the exponent by the factor
/// aq / (aq + Q1).
inline double fraction_old_remaining(double pvp, const ModelParameters& p, PortMode port_mode) {
  if (port_mode == PortMode::Typical) return std::exp(-pvp);
  const double aq = p.alpha * p.Q;
  return std::exp(-(aq / (aq + p.Q1)) * pvp);
}

}  // namespace plasmaflow
