#include "advgame/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace advgame::frontier {

namespace {

// Collinearity tolerance for the hull cross-product test (relative).
constexpr double kHullEps = 1e-12;

double raw_psi_at_q_one(const kernels::GameParams& p) {
  const double z = p.support_lo();
  const double nn = p.n.value();
  return z * z + nn * p.delta * p.delta / (nn + 2.0);
}

}  // namespace

Locus sweep(const kernels::GameParams& params, const SweepOptions& opts) {
  if (opts.grid_size < 3) throw std::invalid_argument("sweep grid_size must be >= 3");
  const double lo = params.support_lo();
  const double hi = params.support_hi();

  std::vector<double> zs;
  zs.reserve(opts.grid_size + 2 * opts.endpoint_refinement);
  for (int i = 0; i < opts.grid_size; ++i) {
    zs.push_back(lo + (hi - lo) * i / (opts.grid_size - 1));
  }
  // Phi is steep near the endpoints at large N; add geometric refinement.
  const double w = opts.endpoint_window * params.delta;
  for (int k = 0; k < opts.endpoint_refinement; ++k) {
    const double off = w * std::pow(0.5, k);
    zs.push_back(lo + off);
    zs.push_back(hi - off);
  }
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());

  Locus locus{params, {}, opts.grid_size};
  locus.samples.reserve(zs.size());
  locus.samples.push_back({lo, 1.0, raw_psi_at_q_one(params)});
  for (size_t i = 1; i + 1 < zs.size(); ++i) {
    const double z = zs[i];
    const double q = kernels::phi(params, z);
    // Enforce strictly decreasing q: at N ~ 250 the tail of the window
    // underflows to q = 0 over many samples; those collapse onto the
    // exact (q=0, psi=0) endpoint appended below.
    if (q >= locus.samples.back().q || q <= 0.0) continue;
    locus.samples.push_back({z, q, kernels::psi(params, z)});
  }
  locus.samples.push_back({hi, 0.0, 0.0});
  return locus;
}

double phi_inverse(const kernels::GameParams& params, double q) {
  if (q < 0.0 || q > 1.0) throw std::domain_error("phi_inverse requires q in [0,1]");
  const double lo = params.support_lo();
  const double hi = params.support_hi();
  if (q >= 1.0) return lo;
  if (q <= 0.0) return hi;
  double a = lo;
  double b = hi;
  const double tol = 1e-12 * params.delta;
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    if (kernels::phi(params, m) > q) {
      a = m;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

CharacteristicCurve upper_concave_envelope(const Locus& locus, double alpha_min) {
  // Points in ascending q; the sweep already guarantees the exact
  // (0, 0) and (1, psi_lo) endpoints and strict monotonicity.
  std::vector<std::pair<double, double>> pts;
  pts.reserve(locus.samples.size());
  for (auto it = locus.samples.rbegin(); it != locus.samples.rend(); ++it) {
    pts.emplace_back(it->q, it->psi);
  }
  size_t distinct = 0;
  for (size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].first > pts[i - 1].first) ++distinct;
  }
  if (pts.size() < 2 || distinct + 1 < 2) {
    throw std::invalid_argument("envelope needs at least 2 distinct q values");
  }

  // Monotone-chain upper hull; near-collinear middle points are dropped
  // so hull vertex sets are deterministic.
  std::vector<std::pair<double, double>> hull;
  hull.reserve(pts.size());
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull[hull.size() - 1];
      const double lhs = (b.first - a.first) * (p.second - a.second);
      const double rhs = (b.second - a.second) * (p.first - a.first);
      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
      if (lhs - rhs >= -kHullEps * scale) {
        hull.pop_back();  // b is on or below chord a->p
      } else {
        break;
      }
    }
    hull.push_back(p);
  }

  CharacteristicCurve curve{locus.params, {}, alpha_min};
  curve.vertices.reserve(hull.size());
  for (const auto& v : hull) {
    curve.vertices.push_back({v.first, v.second, true});
  }
  return curve;
}

double CharacteristicCurve::envelope(double q) const {
  const auto& vs = vertices;
  if (q <= vs.front().q) return vs.front().psi;
  if (q >= vs.back().q) return vs.back().psi;
  auto it = std::lower_bound(vs.begin(), vs.end(), q,
                             [](const HullVertex& v, double x) { return v.q < x; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double t = (q - a.q) / (b.q - a.q);
  return a.psi + t * (b.psi - a.psi);
}

double c_eta(const CharacteristicCurve& curve, double alpha) {
  if (!(alpha > curve.alpha_min) || alpha > 1.0) {
    throw std::domain_error("alpha outside (" + std::to_string(curve.alpha_min) +
                            ", 1]: c_eta is evaluated only above the configured floor");
  }
  return curve.envelope(alpha) / (4.0 * alpha);
}

void write_curve_csv(std::ostream& out, const CharacteristicCurve& curve,
                     const std::vector<double>& alphas) {
  out << "alpha,c_eta,eta,n,delta\n";
  char buf[64];
  auto fmt = [&buf](double x) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  std::vector<double> sorted = alphas;
  std::sort(sorted.begin(), sorted.end());
  for (double a : sorted) {
    out << fmt(a) << ',' << fmt(c_eta(curve, a)) << ',' << fmt(curve.params.eta) << ','
        << curve.params.n.value() << ',' << fmt(curve.params.delta) << '\n';
  }
}

}  // namespace advgame::frontier
