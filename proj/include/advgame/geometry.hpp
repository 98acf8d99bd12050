#pragma once

#include <utility>

#include "advgame/logvalue.hpp"

namespace advgame::geometry {

// Euclidean dimension, N >= 1.
class Dim {
 public:
  explicit Dim(int n);
  int value() const { return n_; }

 private:
  int n_;
};

// Hyperspherical cap {x : ||x|| <= r, x_1 >= c}. The cut distance c is
// signed; |c| <= r. c = r is the empty cap, c = -r the whole ball.
struct CapSpec {
  double r;
  double c;
};

// Inputs within this relative distance of a degenerate configuration are
// routed to the exact 0/1 branches instead of the continuum formulas.
inline constexpr double kDegenerateTol = 1e-12;

// log V_N(r) = (N/2) log pi + N log r - lgamma(N/2 + 1).
LogValue ball_volume_log(Dim n, double r);

// E[||X||^2] for X uniform on the ball: N r^2 / (N + 2).
double ball_second_moment(Dim n, double r);

// K_N(r,c) / V_N(r), in [0,1].
double cap_fraction(Dim n, const CapSpec& spec);

// log of the cap fraction; stays finite where the plain fraction would
// underflow (sign 0 only for the exactly-empty cap).
LogValue cap_fraction_log(Dim n, const CapSpec& spec);

// log K_N(r,c).
LogValue cap_volume_log(Dim n, const CapSpec& spec);

// log Q_N(r,c), Q_N = ((r^2-c^2)/(N+1)) V_{N-1}(sqrt(r^2-c^2)).
LogValue cap_first_moment_log(Dim n, const CapSpec& spec);

// log J_N(r,c), J_N = (N r^2/(N+2)) K_N + (2c/(N+2)) Q_N (signed sum).
LogValue cap_second_moment_log(Dim n, const CapSpec& spec);

// Moments of the mirrored cap of a ball centered at distance z on the
// axis: first = z K - Q, second = z^2 K - 2z Q + J. Requires 0 <= c <= r
// and z >= 0.
std::pair<LogValue, LogValue> shifted_cap_moments_log(Dim n, double r, double c, double z);

// V(r1, r2, d) / V_N(r1): intersection volume of two balls at center
// distance d, normalized by the first ball. Composed in log space so the
// (r2/r1)^N factor never materializes.
double intersection_fraction(Dim n, double r1, double r2, double d);

namespace detail {
// log V_k(1) for k >= 0 (V_0 = 1 by convention; needed for Q_N at N = 1).
double log_unit_ball_volume(int k);
// log I_x(a, b), regularized incomplete beta via Lentz's continued
// fraction. one_minus_x is passed separately to keep tail accuracy.
double log_reg_inc_beta(double a, double b, double x, double one_minus_x);
}  // namespace detail

}  // namespace advgame::geometry
