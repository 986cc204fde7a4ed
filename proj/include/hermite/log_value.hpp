#pragma once

#include <cmath>
#include <limits>

namespace hermite {

// sign * exp(log_mag). log_mag is ignored when sign == 0.
struct LogValue {
  int sign = 0;
  double log_mag = -std::numeric_limits<double>::infinity();

  static LogValue from_log(double log_mag, int sign = 1) { return {sign, log_mag}; }

  static LogValue from_double(double v) {
    if (v == 0.0) return {};
    return {v > 0.0 ? 1 : -1, std::log(std::fabs(v))};
  }

  // Overflows to +-inf (or underflows to 0) outside the double range.
  double to_double() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }

  bool is_zero() const { return sign == 0; }
};

inline LogValue operator*(LogValue a, LogValue b) {
  if (a.sign == 0 || b.sign == 0) return {};
  return {a.sign * b.sign, a.log_mag + b.log_mag};
}

inline LogValue operator/(LogValue a, LogValue b) {
  if (b.sign == 0) return {a.sign, std::numeric_limits<double>::infinity()};
  if (a.sign == 0) return {};
  return {a.sign * b.sign, a.log_mag - b.log_mag};
}

inline LogValue pow(LogValue a, int n) {
  if (n == 0) return {1, 0.0};
  if (a.sign == 0) return {};
  return {(n % 2 != 0) ? a.sign : 1, n * a.log_mag};
}

// A value together with an estimate of its relative error, expressed as an
// absolute error on log_mag. The estimate is not a rigorous enclosure.
struct EvalResult {
  LogValue value;
  double abs_err_log = 0.0;
};

}  // namespace hermite
