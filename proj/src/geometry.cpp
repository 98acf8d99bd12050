#include "advgame/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace advgame::geometry {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

Dim::Dim(int n) : n_(n) {
  if (n < 1) throw std::domain_error("dimension must be >= 1, got " + std::to_string(n));
}

namespace detail {

double log_unit_ball_volume(int k) {
  return 0.5 * k * std::log(kPi) - std::lgamma(0.5 * k + 1.0);
}

// Lentz's method for the incomplete-beta continued fraction (the series
// of Didonato & Morris as popularized by Numerical Recipes).
double beta_cont_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 3e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

double log_reg_inc_beta(double a, double b, double x, double one_minus_x) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  if (one_minus_x <= 0.0) return 0.0;
  const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double front = a * std::log(x) + b * std::log(one_minus_x) - log_beta - std::log(a);
    return front + std::log(beta_cont_fraction(a, b, x));
  }
  // I_x(a,b) = 1 - I_{1-x}(b,a); the complement is in the convergent
  // regime and is bounded away from 1, so log1p is safe.
  const double front =
      b * std::log(one_minus_x) + a * std::log(x) - log_beta - std::log(b);
  const double log_complement = front + std::log(beta_cont_fraction(b, a, one_minus_x));
  return std::log1p(-std::exp(log_complement));
}

}  // namespace detail

LogValue ball_volume_log(Dim n, double r) {
  require(r > 0.0, "ball radius must be positive");
  return LogValue::from_log(detail::log_unit_ball_volume(n.value()) + n.value() * std::log(r));
}

double ball_second_moment(Dim n, double r) {
  require(r > 0.0, "ball radius must be positive");
  const double nn = n.value();
  return nn * r * r / (nn + 2.0);
}

LogValue cap_fraction_log(Dim n, const CapSpec& spec) {
  const double r = spec.r;
  const double c = spec.c;
  require(r > 0.0, "cap radius must be positive");
  require(std::abs(c) <= r * (1.0 + kDegenerateTol), "cap cut distance must satisfy |c| <= r");
  if (c >= r * (1.0 - kDegenerateTol)) return LogValue::zero();       // empty cap
  if (c <= -r * (1.0 - kDegenerateTol)) return LogValue::from_log(0.0);  // full ball
  const double t = c / r;
  // 1 - t^2 factored to keep accuracy near both poles.
  const double x = ((r - c) / r) * ((r + c) / r);
  const double one_minus_x = t * t;
  const double a = 0.5 * (n.value() + 1);
  const double log_i = detail::log_reg_inc_beta(a, 0.5, x, one_minus_x);
  if (c >= 0.0) {
    return LogValue::from_log(std::log(0.5) + log_i);
  }
  return LogValue::from_log(std::log1p(-0.5 * std::exp(log_i)));
}

double cap_fraction(Dim n, const CapSpec& spec) {
  const LogValue lf = cap_fraction_log(n, spec);
  if (lf.is_zero()) return 0.0;
  return std::min(1.0, std::exp(lf.log_mag));
}

LogValue cap_volume_log(Dim n, const CapSpec& spec) {
  return ball_volume_log(n, spec.r) * cap_fraction_log(n, spec);
}

LogValue cap_first_moment_log(Dim n, const CapSpec& spec) {
  const double r = spec.r;
  const double c = spec.c;
  require(r > 0.0, "cap radius must be positive");
  require(std::abs(c) <= r * (1.0 + kDegenerateTol), "cap cut distance must satisfy |c| <= r");
  const double h2 = (r - c) * (r + c);  // squared intersection height
  if (h2 <= 0.0) return LogValue::zero();
  const int nn = n.value();
  return LogValue::from_log(detail::log_unit_ball_volume(nn - 1) - std::log(nn + 1.0) +
                            0.5 * (nn + 1) * std::log(h2));
}

LogValue cap_second_moment_log(Dim n, const CapSpec& spec) {
  const double nn = n.value();
  const LogValue k = cap_volume_log(n, spec);
  const LogValue q = cap_first_moment_log(n, spec);
  return log_sum({k.scaled(nn * spec.r * spec.r / (nn + 2.0)),
                  q.scaled(2.0 * spec.c / (nn + 2.0))});
}

std::pair<LogValue, LogValue> shifted_cap_moments_log(Dim n, double r, double c, double z) {
  require(r > 0.0, "cap radius must be positive");
  require(c >= 0.0 && c <= r * (1.0 + kDegenerateTol),
          "shifted cap requires 0 <= c <= r");
  require(z >= 0.0, "shifted cap offset must be nonnegative");
  const CapSpec spec{r, c};
  const LogValue k = cap_volume_log(n, spec);
  const LogValue q = cap_first_moment_log(n, spec);
  const LogValue j = cap_second_moment_log(n, spec);
  const LogValue first = log_sum({k.scaled(z), q.scaled(-1.0)});
  const LogValue second = log_sum({k.scaled(z * z), q.scaled(-2.0 * z), j});
  return {first, second};
}

double intersection_fraction(Dim n, double r1, double r2, double d) {
  require(r1 > 0.0 && r2 > 0.0, "ball radii must be positive");
  require(d >= 0.0, "center distance must be nonnegative");
  if (d >= r1 + r2) return 0.0;
  const double log_ratio = n.value() * (std::log(r2) - std::log(r1));
  if (d <= std::abs(r1 - r2)) {
    // Containment: the smaller ball is the whole intersection. For
    // r2 < r1 the fraction (r2/r1)^N may underflow; it then reads 0.
    if (r2 >= r1) return 1.0;
    return std::exp(log_ratio);
  }
  double c1 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
  double c2 = (d * d + r2 * r2 - r1 * r1) / (2.0 * d);
  c1 = std::clamp(c1, -r1, r1);
  c2 = std::clamp(c2, -r2, r2);
  const LogValue f1 = cap_fraction_log(n, {r1, c1});
  const LogValue f2 = cap_fraction_log(n, {r2, c2});
  const LogValue total = log_sum({f1, LogValue::from_log(f2.log_mag + log_ratio, f2.sign)});
  if (total.is_zero()) return 0.0;
  return std::min(1.0, std::exp(total.log_mag));
}

}  // namespace advgame::geometry
