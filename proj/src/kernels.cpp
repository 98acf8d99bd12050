#include "advgame/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace advgame::kernels {

namespace {

// Relative slack for floating-point drift at the support endpoints.
constexpr double kEdgeTol = 1e-12;

}  // namespace

GameParams::GameParams(geometry::Dim n_, double delta_, double eta_)
    : n(n_), delta(delta_), eta(eta_) {
  if (!(delta > 0.0)) throw std::domain_error("delta must be positive");
  if (!(eta >= 2.0))
    throw std::domain_error("acceptance threshold eta must be >= 2, got " + std::to_string(eta));
}

double cut_point(const GameParams& params, double z) {
  if (z <= 0.0) throw std::domain_error("cut point undefined at z = 0");
  const double d2 = params.delta * params.delta;
  return (z * z + d2 * (1.0 - params.eta * params.eta)) / (2.0 * z);
}

double phi(const GameParams& params, double z) {
  if (z < 0.0) throw std::domain_error("noise magnitude must be nonnegative");
  const double lo = params.support_lo();
  const double hi = params.support_hi();
  const double slack = kEdgeTol * hi;
  if (z <= lo + slack) return 1.0;
  if (z >= hi - slack) return 0.0;
  return geometry::intersection_fraction(params.n, params.delta, params.eta * params.delta, z);
}

double psi(const GameParams& params, double z) {
  if (z < 0.0) throw std::domain_error("noise magnitude must be nonnegative");
  const double nn = params.n.value();
  const double lo = params.support_lo();
  const double hi = params.support_hi();
  const double slack = kEdgeTol * hi;
  if (z <= lo + slack) return z * z + nn * params.delta * params.delta / (nn + 2.0);
  if (z >= hi - slack) return 0.0;

  // Lens branch: caps of the honest ball (cut u_c) and the acceptance
  // ball (cut z - u_c), all moments combined in log space and divided by
  // V_N(Delta) once at the end.
  const double uc = cut_point(params, z);
  const double c2 = z - uc;
  const geometry::CapSpec honest{params.delta, uc};
  const geometry::CapSpec accept{params.eta * params.delta, c2};
  const LogValue k1 = geometry::cap_volume_log(params.n, honest);
  const LogValue j1 = geometry::cap_second_moment_log(params.n, honest);
  const LogValue k2 = geometry::cap_volume_log(params.n, accept);
  const LogValue q2 = geometry::cap_first_moment_log(params.n, accept);
  const LogValue j2 = geometry::cap_second_moment_log(params.n, accept);
  const LogValue total = log_sum({j1, k1.scaled(z * z),
                                  j2, k2.scaled(4.0 * z * z), q2.scaled(-2.0 * z)});
  if (total.is_zero()) return 0.0;
  const LogValue vol = geometry::ball_volume_log(params.n, params.delta);
  const double value = total.sign * std::exp(total.log_mag - vol.log_mag);
  return std::max(0.0, value);
}

}  // namespace advgame::kernels
