#include "advgame/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace advgame::verify {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 60);
}

double cap_fraction_quadrature(int n, double r, double c) {
  if (!(r > 0.0) || std::abs(c) > r) throw std::domain_error("bad cap");
  const double t0 = c / r;
  auto integrand = [n](double t) { return std::pow(1.0 - t * t, 0.5 * (n - 1)); };
  const double upper = adaptive_simpson(integrand, t0, 1.0, 1e-13);
  const double whole = adaptive_simpson(integrand, -1.0, 1.0, 1e-13);
  return upper / whole;
}

double k2_closed(double r, double c) {
  return r * r * std::acos(c / r) - c * std::sqrt(r * r - c * c);
}

double q2_closed(double r, double c) { return 2.0 / 3.0 * std::pow(r * r - c * c, 1.5); }

double j2_closed(double r, double c) {
  return 0.5 * r * r * k2_closed(r, c) + 0.5 * c * q2_closed(r, c);
}

double phi2_closed(double delta, double eta, double z) {
  if (z <= (eta - 1.0) * delta) return 1.0;
  if (z >= (eta + 1.0) * delta) return 0.0;
  const double uc = (z * z + delta * delta * (1.0 - eta * eta)) / (2.0 * z);
  return (k2_closed(delta, uc) + k2_closed(eta * delta, z - uc)) / (kPi * delta * delta);
}

double psi2_closed(double delta, double eta, double z) {
  if (z <= (eta - 1.0) * delta) return z * z + 0.5 * delta * delta;
  if (z >= (eta + 1.0) * delta) return 0.0;
  const double uc = (z * z + delta * delta * (1.0 - eta * eta)) / (2.0 * z);
  const double c2 = z - uc;
  const double t1 = j2_closed(delta, uc) + z * z * k2_closed(delta, uc);
  const double t2 = j2_closed(eta * delta, c2) + 4.0 * z * z * k2_closed(eta * delta, c2) -
                    2.0 * z * q2_closed(eta * delta, c2);
  return (t1 + t2) / (kPi * delta * delta);
}

LpSolution lp_two_point_max(const kernels::GameParams& params, int z_points, double alpha) {
  if (z_points < 2) throw std::invalid_argument("lp oracle needs >= 2 z points");
  const double lo = params.support_lo();
  const double hi = params.support_hi();
  std::vector<double> zs(z_points);
  std::vector<double> phis(z_points);
  std::vector<double> psis(z_points);
  for (int i = 0; i < z_points; ++i) {
    zs[i] = lo + (hi - lo) * i / (z_points - 1);
    phis[i] = kernels::phi(params, zs[i]);
    psis[i] = kernels::psi(params, zs[i]);
  }
  LpSolution best{-1.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < z_points; ++i) {
    for (int j = i; j < z_points; ++j) {
      double w;
      if (i == j) {
        if (std::abs(phis[i] - alpha) > 1e-12) continue;
        w = 1.0;
      } else {
        if (phis[i] == phis[j]) continue;
        w = (alpha - phis[j]) / (phis[i] - phis[j]);
        if (w < 0.0 || w > 1.0) continue;
      }
      const double value = w * psis[i] + (1.0 - w) * psis[j];
      if (value > best.value) best = {value, zs[i], zs[j], w};
    }
  }
  if (best.value < 0.0) throw std::runtime_error("lp oracle found no feasible support");
  return best;
}

std::vector<Check> kernel_mc_suite(const std::vector<std::tuple<int, double, double>>& combos,
                                   double delta, std::uint64_t samples, std::uint64_t seed,
                                   double sigmas, int threads) {
  std::vector<Check> checks;
  int idx = 0;
  for (const auto& [n, eta, z] : combos) {
    const kernels::GameParams params{geometry::Dim(n), delta, eta};
    sim::SimConfig cfg{params, sim::FixedMagnitude{z}, samples,
                       seed + static_cast<std::uint64_t>(idx), 65'536, threads};
    const sim::SimResult res = sim::run(cfg);
    const double phi = kernels::phi(params, z);
    const double psi = kernels::psi(params, z);
    const std::string tag =
        "n=" + std::to_string(n) + " eta=" + std::to_string(eta) + " z=" + std::to_string(z);
    {
      const double se = std::max(res.pa_stderr, 1e-12);
      const double dist = std::abs(res.pa_hat - phi) / se;
      checks.push_back({"pa " + tag, phi, res.pa_hat, dist, sigmas, dist <= sigmas});
    }
    if (res.mse_hat && res.mse_stderr) {
      const double expected = psi / (4.0 * phi);
      const double se = std::max(*res.mse_stderr, 1e-12);
      const double dist = std::abs(*res.mse_hat - expected) / se;
      checks.push_back({"mse " + tag, expected, *res.mse_hat, dist, sigmas, dist <= sigmas});
    }
    ++idx;
  }
  return checks;
}

std::vector<Check> closed_form_suite(int grid_points) {
  std::vector<Check> checks;
  const geometry::Dim two(2);
  const geometry::Dim one(1);

  // 10 radii x 10 cuts ~ grid_points cells.
  const int side = std::max(2, static_cast<int>(std::round(std::sqrt(grid_points))));
  double max_rel = 0.0;
  for (int ri = 0; ri < side; ++ri) {
    const double r = 0.5 + 7.5 * ri / (side - 1);
    for (int ci = 0; ci < side; ++ci) {
      const double c = (-0.95 + 1.9 * ci / (side - 1)) * r;
      const geometry::CapSpec spec{r, c};
      const double k = geometry::cap_volume_log(two, spec).to_real();
      const double q = geometry::cap_first_moment_log(two, spec).to_real();
      const double j = geometry::cap_second_moment_log(two, spec).to_real();
      max_rel = std::max(max_rel, std::abs(k - k2_closed(r, c)) / k2_closed(r, c));
      max_rel = std::max(max_rel, std::abs(q - q2_closed(r, c)) / q2_closed(r, c));
      max_rel = std::max(max_rel, std::abs(j - j2_closed(r, c)) / j2_closed(r, c));
    }
  }
  checks.push_back({"cap K/Q/J vs 2-D closed forms (max rel err)", 0.0, max_rel, max_rel, 1e-9,
                    max_rel <= 1e-9});

  double max_phi = 0.0;
  for (const double eta : {2.0, 5.0, 8.0}) {
    const kernels::GameParams params{two, 1.0, eta};
    for (int i = 1; i < 40; ++i) {
      const double z =
          params.support_lo() + (params.support_hi() - params.support_lo()) * i / 40.0;
      const double a = kernels::phi(params, z);
      const double b = phi2_closed(1.0, eta, z);
      max_phi = std::max(max_phi, std::abs(a - b) / std::max(b, 1e-12));
      const double pa = kernels::psi(params, z);
      const double pb = psi2_closed(1.0, eta, z);
      max_phi = std::max(max_phi, std::abs(pa - pb) / std::max(pb, 1e-12));
    }
  }
  checks.push_back({"phi/psi vs 2-D closed forms (max rel err)", 0.0, max_phi, max_phi, 1e-9,
                    max_phi <= 1e-9});

  double max_n1 = 0.0;
  for (int ri = 0; ri < side; ++ri) {
    const double r = 0.25 + 4.0 * ri / (side - 1);
    for (int ci = 0; ci < side; ++ci) {
      const double c = (-0.99 + 1.98 * ci / (side - 1)) * r;
      const double k = geometry::cap_volume_log(one, {r, c}).to_real();
      max_n1 = std::max(max_n1, std::abs(k - (r - c)) / (r - c));
    }
  }
  checks.push_back(
      {"n=1 cap volume vs r-c (max rel err)", 0.0, max_n1, max_n1, 1e-14, max_n1 <= 1e-14});
  return checks;
}

std::vector<Check> quadrature_suite() {
  double max_rel = 0.0;
  for (const int n : {1, 2, 3, 10, 25, 101, 250}) {
    for (const double r : {0.7, 1.0, 4.0}) {
      for (int ci = 0; ci <= 12; ++ci) {
        const double c = (-0.9 + 1.8 * ci / 12.0) * r;
        const double prod = geometry::cap_fraction(geometry::Dim(n), {r, c});
        const double quad = cap_fraction_quadrature(n, r, c);
        if (quad > 1e-12) {
          max_rel = std::max(max_rel, std::abs(prod - quad) / quad);
        }
      }
    }
  }
  return {{"cap fraction: incomplete beta vs adaptive quadrature (max rel err)", 0.0, max_rel,
           max_rel, 1e-10, max_rel <= 1e-10}};
}

std::vector<Check> lp_suite(int n, double delta, const std::vector<double>& etas,
                            const std::vector<double>& alphas, int z_points, double rel_bound,
                            const frontier::SweepOptions& sweep_opts) {
  std::vector<Check> checks;
  for (const double eta : etas) {
    const kernels::GameParams params{geometry::Dim(n), delta, eta};
    const auto curve = frontier::upper_concave_envelope(frontier::sweep(params, sweep_opts),
                                                        sweep_opts.alpha_min);
    for (const double alpha : alphas) {
      const double expected = 4.0 * alpha * frontier::c_eta(curve, alpha);
      const double lp = lp_two_point_max(params, z_points, alpha).value;
      const double rel = std::abs(lp - expected) / std::max(std::abs(expected), 1e-300);
      checks.push_back({"lp oracle n=" + std::to_string(n) + " eta=" + std::to_string(eta) +
                            " alpha=" + std::to_string(alpha) +
                            " zpts=" + std::to_string(z_points),
                        expected, lp, rel, rel_bound, rel <= rel_bound});
    }
  }
  return checks;
}

nlohmann::json checks_to_json(const std::vector<Check>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Check& c : checks) {
    arr.push_back({{"name", c.name},
                   {"expected", game::round_sig10(c.expected)},
                   {"observed", game::round_sig10(c.observed)},
                   {"distance", game::round_sig10(c.distance)},
                   {"bound", c.bound},
                   {"pass", c.pass}});
  }
  return arr;
}

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

}  // namespace advgame::verify
