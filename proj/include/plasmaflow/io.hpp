#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "plasmaflow/errors.hpp"
#include "plasmaflow/experiments.hpp"
#include "plasmaflow/kinetics.hpp"
#include "plasmaflow/time_series.hpp"

namespace plasmaflow {

/// One simulation run as described by a config file plus command-line
/// selections. Duration is stored in hours (the config unit) so that a
/// write/parse round trip is exact; duration_s() converts.
struct RunConfig {
  ModelParameters parameters;
  ModelConfiguration configuration;
  double duration_h = 4.0;
  double dt = 0.01;
  std::int64_t stride = 100;
  std::string output_path;

  double duration_s() const { return duration_h * 3600.0; }
};

namespace detail {

inline const char* config_key(const std::string& field) {
  if (field == "Q") return "Q_mL_per_s";
  if (field == "Q1") return "Q1_mL_per_s";
  if (field == "s1") return "s1_s";
  if (field == "s2") return "s2_s";
  if (field == "V3") return "V3_mL";
  return "alpha";
}

}  // namespace detail

/// Initial quiescent window s1 + s2 + s3 after grid snapping, in seconds.
inline double initial_window_seconds(const ModelParameters& p, double dt) {
  return derive_quantities(p, {EcmoMode::VA, PortMode::Typical, ModelKind::DDE}, dt).window();
}

/// Checks the run-level invariants (stride, dt, duration vs initial window).
inline void validate_run_config(const RunConfig& cfg) {
  if (cfg.stride < 1) throw ValidationFailed("stride", "must be a positive integer");
  if (!(cfg.dt > 0.0)) throw ValidationFailed("dt_s", "must be positive");
  if (!(cfg.duration_h > 0.0)) throw ValidationFailed("duration_h", "must be positive");
  double window = 0.0;
  try {
    window = initial_window_seconds(cfg.parameters, cfg.dt);
  } catch (const ZeroLagAfterRounding& e) {
    throw ValidationFailed("dt_s", e.what());
  }
  if (!(cfg.duration_s() > window))
    throw ValidationFailed("duration_h", "duration must exceed the initial window of " +
                                             detail::num(window) + " s");
}

/// Parses a flat JSON object with the six parameter keys (required) and
/// duration_h / dt_s / stride (optional). Unknown keys are ignored with a
/// warning on stderr. The parameter set is validated before returning.
inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");

  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error("config " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw Error("config " + path + " must be a JSON object");

  auto required_number = [&doc](const char* key) {
    if (!doc.contains(key)) throw MissingKey(key);
    const auto& v = doc.at(key);
    if (!v.is_number()) throw TypeError(key, "expected a number");
    return v.get<double>();
  };

  RunConfig cfg;
  cfg.parameters.Q = required_number("Q_mL_per_s");
  cfg.parameters.Q1 = required_number("Q1_mL_per_s");
  cfg.parameters.alpha = required_number("alpha");
  cfg.parameters.s1 = required_number("s1_s");
  cfg.parameters.s2 = required_number("s2_s");
  cfg.parameters.V3 = required_number("V3_mL");

  if (doc.contains("duration_h")) {
    if (!doc.at("duration_h").is_number()) throw TypeError("duration_h", "expected a number");
    cfg.duration_h = doc.at("duration_h").get<double>();
  }
  if (doc.contains("dt_s")) {
    if (!doc.at("dt_s").is_number()) throw TypeError("dt_s", "expected a number");
    cfg.dt = doc.at("dt_s").get<double>();
  }
  if (doc.contains("stride")) {
    if (!doc.at("stride").is_number_integer()) throw TypeError("stride", "expected an integer");
    cfg.stride = doc.at("stride").get<std::int64_t>();
  }

  static const char* known[] = {"Q_mL_per_s", "Q1_mL_per_s", "alpha",      "s1_s", "s2_s",
                                "V3_mL",      "duration_h",  "dt_s",       "stride"};
  std::string unknown;
  for (const auto& [key, value] : doc.items()) {
    bool found = false;
    for (const char* k : known) found |= (key == k);
    if (!found) unknown += (unknown.empty() ? "" : ", ") + key;
  }
  if (!unknown.empty())
    std::cerr << "warning: ignoring unknown config keys: " << unknown << "\n";

  try {
    validate_parameters(cfg.parameters);
  } catch (const NonPositiveParameter& e) {
    throw ValidationFailed(detail::config_key(e.field()), e.what());
  } catch (const FlowConstraintViolated& e) {
    throw ValidationFailed("alpha", e.what());
  }
  validate_run_config(cfg);
  return cfg;
}

/// Writes the JSON counterpart of parse_config. Doubles round-trip exactly.
inline void write_config(const RunConfig& cfg, const std::string& path) {
  nlohmann::json doc;
  doc["Q_mL_per_s"] = cfg.parameters.Q;
  doc["Q1_mL_per_s"] = cfg.parameters.Q1;
  doc["alpha"] = cfg.parameters.alpha;
  doc["s1_s"] = cfg.parameters.s1;
  doc["s2_s"] = cfg.parameters.s2;
  doc["V3_mL"] = cfg.parameters.V3;
  doc["duration_h"] = cfg.duration_h;
  doc["dt_s"] = cfg.dt;
  doc["stride"] = cfg.stride;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out << doc.dump(2) << "\n";
  if (!out) throw IoError(path, "write failed");
}

/// Locale-independent, 9 significant digits, '.' decimal separator.
inline std::string format_number(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  return out;
}

inline void finish_csv(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

}  // namespace detail

/// CSV dump of a trajectory, one row per stride-th sample. Column layout is
/// t_seconds,gamma1[,gamma2]; the final row is newline-terminated.
inline void write_timeseries_csv(const TimeSeries& ts, const std::string& path,
                                 std::int64_t stride) {
  if (ts.size() == 0) throw std::invalid_argument("write_timeseries_csv: empty series");
  if (stride < 1) throw ValidationFailed("stride", "must be a positive integer");
  auto out = detail::open_csv(path);
  out << (ts.has_gamma2() ? "t_seconds,gamma1,gamma2\n" : "t_seconds,gamma1\n");
  for (std::size_t i = 0; i < ts.size(); i += static_cast<std::size_t>(stride)) {
    out << format_number(ts.time_at(i)) << ',' << format_number(ts.gamma1[i]);
    if (ts.has_gamma2()) out << ',' << format_number(ts.gamma2[i]);
    out << '\n';
  }
  detail::finish_csv(out, path);
}

/// CSV dump of a percent-difference trajectory (t_seconds,pd_percent).
inline void write_percent_difference_csv(const TimeSeries& pd, const std::string& path,
                                         std::int64_t stride) {
  if (pd.size() == 0) throw std::invalid_argument("write_percent_difference_csv: empty series");
  if (stride < 1) throw ValidationFailed("stride", "must be a positive integer");
  auto out = detail::open_csv(path);
  out << "t_seconds,pd_percent\n";
  for (std::size_t i = 0; i < pd.size(); i += static_cast<std::size_t>(stride))
    out << format_number(pd.time_at(i)) << ',' << format_number(pd.gamma1[i]) << '\n';
  detail::finish_csv(out, path);
}

inline void write_sweep_summary_csv(const SweepReport& report, const std::string& path) {
  auto out = detail::open_csv(path);
  out << "alpha,terminal_pd_percent\n";
  for (const auto& e : report.entries)
    out << format_number(e.alpha) << ',' << format_number(e.terminal_percent_diff) << '\n';
  detail::finish_csv(out, path);
}

inline void write_sensitivity_csv(const SensitivityReport& report, const std::string& path) {
  auto out = detail::open_csv(path);
  out << "parameter,nominal,perturbed,gamma1_nominal,gamma1_perturbed,sensitivity\n";
  for (const auto& e : report.entries)
    out << e.parameter << ',' << format_number(e.nominal_value) << ','
        << format_number(e.perturbed_value) << ',' << format_number(e.gamma1_nominal) << ','
        << format_number(e.gamma1_perturbed) << ',' << format_number(e.sensitivity) << '\n';
  detail::finish_csv(out, path);
}

}  // namespace plasmaflow
