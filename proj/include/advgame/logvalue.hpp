#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <span>

namespace advgame {

// Signed log-space scalar: sign in {-1,0,+1} plus natural log of |value|.
// Keeps quantities that scale like r^N finite for N ~ 250 where direct
// doubles overflow.
struct LogValue {
  int sign = 0;
  double log_mag = -std::numeric_limits<double>::infinity();

  static LogValue zero() { return {}; }

  static LogValue from_log(double log_magnitude, int s = +1) {
    if (s == 0 || (std::isinf(log_magnitude) && log_magnitude < 0.0)) return {};
    return {s, log_magnitude};
  }

  static LogValue from_real(double x) {
    if (x == 0.0) return {};
    return {x > 0.0 ? +1 : -1, std::log(std::abs(x))};
  }

  double to_real() const {
    if (sign == 0) return 0.0;
    return static_cast<double>(sign) * std::exp(log_mag);
  }

  bool is_zero() const { return sign == 0; }

  // Multiply by a plain real factor.
  LogValue scaled(double factor) const {
    if (sign == 0 || factor == 0.0) return {};
    return {factor > 0.0 ? sign : -sign, log_mag + std::log(std::abs(factor))};
  }

  friend LogValue operator*(const LogValue& a, const LogValue& b) {
    if (a.sign == 0 || b.sign == 0) return {};
    return {a.sign * b.sign, a.log_mag + b.log_mag};
  }
};

// Relative cancellation threshold below which a signed sum is declared
// exactly zero (degenerate-cap combinations hit this).
inline constexpr double kLogSumCancelEps = 1e-15;

// Signed log-sum-exp of the given terms. Scales by the largest magnitude,
// accumulates signed residuals, and maps near-total cancellation to zero.
inline LogValue log_sum(std::span<const LogValue> terms) {
  double max_log = -std::numeric_limits<double>::infinity();
  for (const LogValue& t : terms) {
    if (t.sign != 0 && t.log_mag > max_log) max_log = t.log_mag;
  }
  if (std::isinf(max_log)) return LogValue::zero();
  double acc = 0.0;
  for (const LogValue& t : terms) {
    if (t.sign != 0) acc += static_cast<double>(t.sign) * std::exp(t.log_mag - max_log);
  }
  if (std::abs(acc) < kLogSumCancelEps) return LogValue::zero();
  return {acc > 0.0 ? +1 : -1, max_log + std::log(std::abs(acc))};
}

inline LogValue log_sum(std::initializer_list<LogValue> terms) {
  return log_sum(std::span<const LogValue>(terms.begin(), terms.size()));
}

}  // namespace advgame
