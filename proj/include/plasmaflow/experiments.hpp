#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "plasmaflow/ade.hpp"
#include "plasmaflow/dde.hpp"
#include "plasmaflow/kinetics.hpp"
#include "plasmaflow/time_series.hpp"

namespace plasmaflow {

/// Upper bound on concurrently executing experiment runs. PLASMAFLOW_THREADS
/// (positive integer) caps it; malformed or absent values fall back to the
/// hardware default.
inline unsigned parallel_run_cap(std::size_t jobs) {
  unsigned cap = std::thread::hardware_concurrency();
  if (cap == 0) cap = 1;
  if (const char* env = std::getenv("PLASMAFLOW_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && end && *end == '\0' && v > 0)
      cap = static_cast<unsigned>(std::min<long>(v, 1 << 16));
  }
  return static_cast<unsigned>(std::min<std::size_t>(cap, jobs));
}

/// Runs fn(0..n-1), possibly in parallel. Results must be written to
/// per-index slots; the first failing index's exception is rethrown, so the
/// outcome does not depend on scheduling.
template <typename Fn>
void for_each_index(std::size_t n, Fn&& fn) {
  const unsigned cap = parallel_run_cap(n);
  if (cap <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(cap);
  for (unsigned t = 0; t < cap; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Side-by-side run of the algebraic recurrence and the Euler-integrated
/// delay system on one configuration.
struct ComparisonReport {
  ModelConfiguration config;  ///< model_kind is informational; both models run
  double sup_diff = 0.0;      ///< sup_t |gamma1_ade - gamma1_dde|
  double time_of_max = 0.0;   ///< s
  double max_slope = 0.0;     ///< max |d gamma1/dt| over both runs, 1/s
  double shift_bound = 0.0;   ///< max(s1, s2) * max_slope
  TimeSeries ade;
  TimeSeries dde;
};

inline ComparisonReport compare_models(const ModelParameters& p, EcmoMode ecmo_mode,
                                       PortMode port_mode, double duration, double dt) {
  ComparisonReport r;
  r.config = ModelConfiguration{ecmo_mode, port_mode, ModelKind::DDE};
  r.ade = simulate_ade(p, {ecmo_mode, port_mode, ModelKind::ADE}, duration, dt);
  r.dde = simulate_dde(p, r.config, duration, dt);

  std::size_t arg_max = 0;
  for (std::size_t i = 0; i < r.ade.size(); ++i) {
    const double d = std::abs(r.ade.gamma1[i] - r.dde.gamma1[i]);
    if (d > r.sup_diff) {
      r.sup_diff = d;
      arg_max = i;
    }
  }
  r.time_of_max = r.ade.time_at(arg_max);

  // The two models track the same curve up to a transit-time-scale shift in
  // time, so their pointwise gap is bounded by max(s1,s2) times the largest
  // slope either of them attains.
  for (const TimeSeries* ts : {&r.ade, &r.dde})
    for (std::size_t i = 1; i < ts->size(); ++i)
      r.max_slope = std::max(r.max_slope, std::abs(ts->gamma1[i] - ts->gamma1[i - 1]) / dt);
  r.shift_bound = std::max(p.s1, p.s2) * r.max_slope;
  return r;
}

/// pd(t) = 100 (g_typ - g_sw) / g_typ, zero where g_typ is zero (the
/// quiescent initial window).
inline TimeSeries percent_difference(const TimeSeries& typical, const TimeSeries& switched) {
  if (typical.dt != switched.dt || typical.start_time != switched.start_time ||
      typical.size() != switched.size())
    throw GridMismatch("percent_difference: series grids do not match");
  TimeSeries pd;
  pd.dt = typical.dt;
  pd.start_time = typical.start_time;
  pd.gamma1.resize(typical.size());
  for (std::size_t i = 0; i < typical.size(); ++i) {
    const double g = typical.gamma1[i];
    pd.gamma1[i] = g > 0.0 ? 100.0 * (g - switched.gamma1[i]) / g : 0.0;
  }
  return pd;
}

struct AlphaSweepEntry {
  double alpha = 0.0;
  TimeSeries percent_diff;
  double terminal_percent_diff = 0.0;  ///< pd at the final sample
};

struct SweepReport {
  std::vector<AlphaSweepEntry> entries;  ///< in input alpha order
};

inline const std::vector<double>& default_sweep_alphas() {
  static const std::vector<double> alphas{0.02, 0.05, 0.1, 0.3, 0.5, 0.7};
  return alphas;
}

/// For each alpha, runs the delay system in both port orientations and
/// reports the percent difference between them.
inline SweepReport sweep_alpha(const ModelParameters& p, EcmoMode ecmo_mode,
                               const std::vector<double>& alphas, double duration, double dt) {
  for (double a : alphas) {
    ModelParameters pa = p;
    pa.alpha = a;
    validate_parameters(pa);
  }
  SweepReport report;
  report.entries.resize(alphas.size());
  for_each_index(alphas.size(), [&](std::size_t i) {
    ModelParameters pa = p;
    pa.alpha = alphas[i];
    const TimeSeries typ = simulate_dde(pa, {ecmo_mode, PortMode::Typical, ModelKind::DDE},
                                        duration, dt);
    const TimeSeries sw = simulate_dde(pa, {ecmo_mode, PortMode::Switched, ModelKind::DDE},
                                       duration, dt);
    TimeSeries pd = percent_difference(typ, sw);
    const double terminal = pd.gamma1.back();
    report.entries[i] = {alphas[i], std::move(pd), terminal};
  });
  return report;
}

struct SensitivityEntry {
  std::string parameter;
  double nominal_value = 0.0;
  double perturbed_value = 0.0;     ///< 1.1 x nominal
  double gamma1_nominal = 0.0;      ///< at the evaluation time
  double gamma1_perturbed = 0.0;
  double sensitivity = 0.0;         ///< forward difference, 1/unit(parameter)
};

struct SensitivityReport {
  std::vector<SensitivityEntry> entries;  ///< exactly six: Q1, Q, alpha, s1, s2, V3
};

namespace detail {
inline double gamma1_at(const TimeSeries& ts, double t) {
  auto i = std::llround((t - ts.start_time) / ts.dt);
  i = std::clamp<std::int64_t>(i, 0, static_cast<std::int64_t>(ts.size()) - 1);
  return ts.gamma1[static_cast<std::size_t>(i)];
}
}  // namespace detail

/// Forward-difference sensitivity of gamma1(duration) to a +10% bump of each
/// parameter in turn, using the algebraic model. Derived quantities are
/// recomputed per run, so bumping Q or s1/s2 moves the volumes and bumping
/// alpha or V3 moves the ECMO lag.
inline SensitivityReport sensitivity_analysis(const ModelParameters& p, EcmoMode ecmo_mode,
                                              PortMode port_mode, double duration = 14400.0,
                                              double dt = 0.01) {
  validate_parameters(p);
  const ModelConfiguration cfg{ecmo_mode, port_mode, ModelKind::ADE};
  const double g_nominal = detail::gamma1_at(simulate_ade(p, cfg, duration, dt), duration);

  struct Field {
    const char* name;
    double ModelParameters::* member;
  };
  static constexpr Field fields[] = {{"Q1", &ModelParameters::Q1},   {"Q", &ModelParameters::Q},
                                     {"alpha", &ModelParameters::alpha},
                                     {"s1", &ModelParameters::s1},   {"s2", &ModelParameters::s2},
                                     {"V3", &ModelParameters::V3}};

  SensitivityReport report;
  report.entries.resize(std::size(fields));
  for_each_index(std::size(fields), [&](std::size_t i) {
    ModelParameters perturbed = p;
    const double y = p.*(fields[i].member);
    const double y_tilde = 1.1 * y;
    perturbed.*(fields[i].member) = y_tilde;
    try {
      validate_parameters(perturbed);
    } catch (const Error& e) {
      throw PerturbationInvalid(fields[i].name, e.what());
    }
    const double g_perturbed = detail::gamma1_at(simulate_ade(perturbed, cfg, duration, dt),
                                                 duration);
    report.entries[i] = {fields[i].name, y,          y_tilde,
                         g_nominal,      g_perturbed, (g_perturbed - g_nominal) / (y_tilde - y)};
  });
  return report;
}

}  // namespace plasmaflow
