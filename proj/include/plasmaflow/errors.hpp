#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace plasmaflow {

/// Base class of everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}
}  // namespace detail

/// A strictly positive parameter is zero, negative, or NaN.
class NonPositiveParameter : public Error {
 public:
  NonPositiveParameter(std::string field, double value)
      : Error("parameter '" + field + "' must be positive, got " + detail::num(value)),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// The flow ordering Q1 < alpha*Q < Q does not hold.
class FlowConstraintViolated : public Error {
 public:
  FlowConstraintViolated(double q1, double alpha_q, double q)
      : Error("flow constraint Q1 < alpha*Q < Q violated: Q1=" + detail::num(q1) +
              " alpha*Q=" + detail::num(alpha_q) + " Q=" + detail::num(q)),
        q1_(q1),
        alpha_q_(alpha_q),
        q_(q) {}
  double q1() const { return q1_; }
  double alpha_q() const { return alpha_q_; }
  double q() const { return q_; }

 private:
  double q1_, alpha_q_, q_;
};

/// A positive lag collapsed to zero grid steps after rounding.
class ZeroLagAfterRounding : public Error {
 public:
  ZeroLagAfterRounding(const std::string& lag_name, double lag_seconds, double dt)
      : Error("lag " + lag_name + " = " + detail::num(lag_seconds) +
              " s rounds to zero steps of dt = " + detail::num(dt) + " s") {}
};

/// A lag that must be an exact grid multiple is not one.
class LagNotOnGrid : public Error {
 public:
  LagNotOnGrid(double lag_seconds, double dt)
      : Error("lag " + detail::num(lag_seconds) + " s is not a multiple of dt = " +
              detail::num(dt) + " s") {}
};

/// A lookup reaches past the retained history window.
class LagExceedsWindow : public Error {
 public:
  LagExceedsWindow(double lag_seconds, double max_lag)
      : Error("lag " + detail::num(lag_seconds) + " s exceeds the history window of " +
              detail::num(max_lag) + " s") {}
};

/// Timestep too large for the explicit update to stay stable.
class StabilityGuardViolated : public Error {
 public:
  StabilityGuardViolated(double dt, double ratio)
      : Error("dt = " + detail::num(dt) + " s gives dt*Q/min(V1,V2) = " + detail::num(ratio) +
              " >= 2; forward Euler would blow up") {}
};

/// Two time series that must share a grid do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A +10% parameter bump produced an invalid parameter set.
class PerturbationInvalid : public Error {
 public:
  PerturbationInvalid(const std::string& parameter, const std::string& why)
      : Error("perturbing '" + parameter + "' by +10% gives an invalid set: " + why) {}
};

/// Required configuration key absent.
class MissingKey : public Error {
 public:
  explicit MissingKey(std::string key)
      : Error("config key '" + key + "' is missing"), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Configuration key holds a value of the wrong type.
class TypeError : public Error {
 public:
  TypeError(std::string key, const std::string& expected)
      : Error("config key '" + key + "': " + expected), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Configuration value parsed fine but fails validation.
class ValidationFailed : public Error {
 public:
  ValidationFailed(std::string key, const std::string& why)
      : Error("config key '" + key + "': " + why), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Filesystem-level failure; carries the path involved.
class IoError : public Error {
 public:
  IoError(std::string path, const std::string& why)
      : Error(path + ": " + why), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace plasmaflow
