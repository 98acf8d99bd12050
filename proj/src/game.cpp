#include "advgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace advgame::game {

namespace {

const char* form_name(UtilityForm f) {
  switch (f) {
    case UtilityForm::kLogLinear: return "log_linear";
    case UtilityForm::kLinear: return "linear";
    case UtilityForm::kRatio: return "ratio";
  }
  return "?";
}

// Golden-section maximization of f on [a, b] to interval width tol.
template <typename F>
std::pair<double, double> golden_max(F&& f, double a, double b, double tol) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace

void validate_adversary_utility(const UtilitySpec& spec) {
  switch (spec.form) {
    case UtilityForm::kLogLinear:
    case UtilityForm::kLinear:
      if (spec.a > 0.0 && spec.b > 0.0) return;
      throw std::invalid_argument(
          std::string("adversary utility ") + form_name(spec.form) +
          " must be strictly increasing in MSE and PA (requires a > 0 and b > 0)");
    case UtilityForm::kRatio:
      throw std::invalid_argument(
          "ratio utility is decreasing in MSE and cannot model the adversary");
  }
}

void validate_dc_utility(const UtilitySpec& spec) {
  switch (spec.form) {
    case UtilityForm::kLogLinear:
    case UtilityForm::kLinear:
      if (spec.a <= 0.0 && spec.b >= 0.0) return;
      throw std::invalid_argument(
          std::string("dc utility ") + form_name(spec.form) +
          " must be non-increasing in MSE and non-decreasing in PA (requires a <= 0, b >= 0)");
    case UtilityForm::kRatio:
      if (spec.p >= 0.0) return;
      throw std::invalid_argument("dc ratio utility requires exponent p >= 0");
  }
}

double evaluate_utility(const UtilitySpec& spec, double mse, double pa) {
  if (!(mse > 0.0)) throw std::domain_error("utility undefined for MSE <= 0");
  if (!(pa > 0.0) || pa > 1.0) throw std::domain_error("utility requires PA in (0, 1]");
  switch (spec.form) {
    case UtilityForm::kLogLinear: return spec.a * std::log(mse) + spec.b * std::log(pa);
    case UtilityForm::kLinear: return spec.a * mse + spec.b * pa;
    case UtilityForm::kRatio: return pa / std::pow(mse, spec.p);
  }
  return 0.0;
}

namespace {

// Re-refines an envelope maximizer on the raw kernels when the envelope
// touches the locus there. U_AD is nearly flat at its peak, so the
// ~1e-9 relative chord error of the interpolated envelope can displace
// the maximizer by ~1e-4 in alpha; on contact stretches the curve equals
// the raw locus and can be evaluated exactly through z.
std::pair<double, double> contact_polish(const frontier::CharacteristicCurve& curve,
                                         const UtilitySpec& adversary, double alpha_lo,
                                         double alpha_hi, double alpha_hat, double env_value) {
  const auto& params = curve.params;
  const double env = curve.envelope(alpha_hat);
  const double raw = kernels::psi(params, frontier::phi_inverse(params, alpha_hat));
  const double scale = std::max({std::abs(env), std::abs(raw), 1e-300});
  if (std::abs(env - raw) > 1e-8 * scale) {
    return {alpha_hat, env_value};  // chord region: the envelope is the object itself
  }
  const double z_lo = frontier::phi_inverse(params, std::min(alpha_hi, 1.0));
  const double z_hi = frontier::phi_inverse(params, alpha_lo);
  if (!(z_hi > z_lo)) return {alpha_hat, env_value};
  auto util_z = [&](double z) {
    const double q = kernels::phi(params, z);
    if (!(q > curve.alpha_min) || q > 1.0) return -std::numeric_limits<double>::infinity();
    const double p = kernels::psi(params, z);
    if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
    return evaluate_utility(adversary, p / (4.0 * q), q);
  };
  const auto [z_star, value] = golden_max(util_z, z_lo, z_hi, 1e-11 * params.delta);
  if (!std::isfinite(value)) return {alpha_hat, env_value};
  return {kernels::phi(params, z_star), value};
}

}  // namespace

std::vector<double> best_response(const frontier::CharacteristicCurve& curve,
                                  const UtilitySpec& adversary, const BestResponseOptions& opts) {
  validate_adversary_utility(adversary);
  const auto& params = curve.params;
  const double lo = curve.alpha_min;
  const int g = opts.alpha_grid;
  auto util = [&](double alpha) {
    return evaluate_utility(adversary, frontier::c_eta(curve, alpha), alpha);
  };
  auto util_z = [&](double z) {
    const double q = kernels::phi(params, z);
    if (!(q > lo) || q > 1.0) return -std::numeric_limits<double>::infinity();
    const double p = kernels::psi(params, z);
    if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
    return evaluate_utility(adversary, p / (4.0 * q), q);
  };

  std::vector<std::pair<double, double>> cands;

  // Dense scan of (alpha_min, 1] on the envelope; the floor itself is
  // excluded. This pass covers chord (mixture) stretches, where the
  // envelope rather than the locus is the object being maximized.
  std::vector<double> grid(g);
  std::vector<double> vals(g);
  for (int i = 0; i < g; ++i) {
    grid[i] = lo + (1.0 - lo) * (i + 1) / g;
    vals[i] = util(grid[i]);
  }
  for (int i = 0; i < g; ++i) {
    const double left = i > 0 ? vals[i - 1] : -std::numeric_limits<double>::infinity();
    const double right = i + 1 < g ? vals[i + 1] : -std::numeric_limits<double>::infinity();
    if (vals[i] >= left && vals[i] >= right) {
      const double a = i > 0 ? grid[i - 1] : grid[0];
      const double b = i + 1 < g ? grid[i + 1] : grid[g - 1];
      auto cand = a == b ? std::pair<double, double>{grid[i], vals[i]}
                         : golden_max(util, a, b, opts.alpha_tol);
      cands.push_back(contact_polish(curve, adversary, a, b, cand.first, cand.second));
    }
  }

  // Scan the hull vertices, which carry exact raw kernel values, and
  // refine local maxima directly in z. The interpolated envelope has
  // ~1e-9 relative chord error; U_AD is flat enough near its peak that
  // the alpha-grid pass alone can misplace the maximizer by ~1e-4.
  std::vector<const frontier::HullVertex*> verts;
  for (const auto& v : curve.vertices) {
    if (v.q > lo && v.q <= 1.0 && v.psi > 0.0) verts.push_back(&v);
  }
  const int m = static_cast<int>(verts.size());
  std::vector<double> vvals(m);
  for (int i = 0; i < m; ++i) {
    vvals[i] = evaluate_utility(adversary, verts[i]->psi / (4.0 * verts[i]->q), verts[i]->q);
  }
  for (int i = 0; i < m; ++i) {
    const double left = i > 0 ? vvals[i - 1] : -std::numeric_limits<double>::infinity();
    const double right = i + 1 < m ? vvals[i + 1] : -std::numeric_limits<double>::infinity();
    if (vvals[i] >= left && vvals[i] >= right) {
      const double q_hi = i + 1 < m ? verts[i + 1]->q : verts[i]->q;
      const double q_lo = i > 0 ? verts[i - 1]->q : verts[i]->q;
      const double z_lo = frontier::phi_inverse(params, q_hi);
      const double z_hi = frontier::phi_inverse(params, q_lo);
      if (z_hi > z_lo) {
        const auto [z_star, value] = golden_max(util_z, z_lo, z_hi, 1e-11 * params.delta);
        if (std::isfinite(value)) {
          cands.emplace_back(kernels::phi(params, z_star), value);
          continue;
        }
      }
      cands.emplace_back(verts[i]->q, vvals[i]);
    }
  }

  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [x, fx] : cands) best = std::max(best, fx);
  const double eps = opts.value_tol * (1.0 + std::abs(best));

  std::vector<double> out;
  for (const auto& [x, fx] : cands) {
    if (fx >= best - eps) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-8; }),
            out.end());
  return out;
}

std::pair<double, double> worst_case_dc_value(const frontier::CharacteristicCurve& curve,
                                              const std::vector<double>& responses,
                                              const UtilitySpec& dc) {
  if (responses.empty()) throw std::invalid_argument("empty best-response set");
  double best_alpha = 0.0;
  double worst = std::numeric_limits<double>::infinity();
  for (double alpha : responses) {  // ascending: ties keep the smallest alpha
    const double u = evaluate_utility(dc, frontier::c_eta(curve, alpha), alpha);
    if (u < worst) {
      worst = u;
      best_alpha = alpha;
    }
  }
  return {best_alpha, worst};
}

NoiseSpec build_noise(const frontier::CharacteristicCurve& curve, double alpha_star) {
  if (!(alpha_star > curve.alpha_min) || alpha_star > 1.0) {
    throw std::domain_error("alpha_star outside (alpha_min, 1]");
  }
  const auto& params = curve.params;
  const double env = curve.envelope(alpha_star);
  const double z_raw = frontier::phi_inverse(params, alpha_star);
  const double raw = kernels::psi(params, z_raw);
  if (std::abs(env - raw) <= 1e-8 * std::max({std::abs(env), std::abs(raw), 1e-300})) {
    return NoiseSpec{SingleShell{z_raw}};
  }
  // Envelope above the locus: alpha_star lies on a chord between the
  // bracketing contact vertices q1 < alpha_star < q2.
  const auto& vs = curve.vertices;
  auto it = std::lower_bound(vs.begin(), vs.end(), alpha_star,
                             [](const frontier::HullVertex& v, double x) { return v.q < x; });
  if (it == vs.begin() || it == vs.end()) {
    throw std::logic_error("alpha_star not bracketed by hull vertices");
  }
  const double q1 = (it - 1)->q;
  const double q2 = it->q;
  const double z_at_q2 = frontier::phi_inverse(params, q2);  // larger q -> smaller z
  const double z_at_q1 = frontier::phi_inverse(params, q1);
  TwoShellMixture mix{};
  mix.z1 = z_at_q2;
  mix.z2 = z_at_q1;
  mix.beta1 = (alpha_star - q1) / (q2 - q1);  // weight of the q2 shell
  mix.beta2 = (q2 - alpha_star) / (q2 - q1);
  return NoiseSpec{mix};
}

EquilibriumReport optimal_eta(geometry::Dim n, double delta, const std::vector<double>& eta_grid,
                              const UtilitySpec& adversary, const UtilitySpec& dc,
                              const frontier::SweepOptions& sweep_opts,
                              const BestResponseOptions& br_opts) {
  if (eta_grid.empty()) throw std::invalid_argument("empty eta grid");
  validate_adversary_utility(adversary);
  validate_dc_utility(dc);

  std::vector<double> etas = eta_grid;
  std::sort(etas.begin(), etas.end());

  std::vector<PerEtaRow> table;
  table.reserve(etas.size());
  int best_idx = -1;
  for (size_t i = 0; i < etas.size(); ++i) {
    const kernels::GameParams params(n, delta, etas[i]);
    const auto curve = frontier::upper_concave_envelope(frontier::sweep(params, sweep_opts),
                                                        sweep_opts.alpha_min);
    const auto responses = best_response(curve, adversary, br_opts);
    const auto [alpha, u_dc] = worst_case_dc_value(curve, responses, dc);
    const double mse = frontier::c_eta(curve, alpha);
    table.push_back({etas[i], alpha, mse, evaluate_utility(adversary, mse, alpha), u_dc});
    if (best_idx < 0 || u_dc > table[best_idx].u_dc) best_idx = static_cast<int>(i);
  }

  const PerEtaRow& star = table[best_idx];
  const kernels::GameParams params(n, delta, star.eta);
  const auto curve = frontier::upper_concave_envelope(frontier::sweep(params, sweep_opts),
                                                      sweep_opts.alpha_min);
  return EquilibriumReport{star.eta,  star.alpha_star,
                           star.mse,  star.u_ad,
                           star.u_dc, build_noise(curve, star.alpha_star),
                           table};
}

double round_sig10(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return std::strtod(buf, nullptr);
}

nlohmann::json NoiseSpec::to_json() const {
  nlohmann::json j;
  if (const auto* s = std::get_if<SingleShell>(&shape)) {
    j["variant"] = "single_shell";
    j["z"] = round_sig10(s->z);
  } else {
    const auto& m = std::get<TwoShellMixture>(shape);
    j["variant"] = "two_shell_mixture";
    j["z1"] = round_sig10(m.z1);
    j["z2"] = round_sig10(m.z2);
    j["beta1"] = round_sig10(m.beta1);
    j["beta2"] = round_sig10(m.beta2);
  }
  return j;
}

nlohmann::json EquilibriumReport::to_json() const {
  nlohmann::json j;
  j["eta_star"] = round_sig10(eta_star);
  j["alpha_star"] = round_sig10(alpha_star);
  j["mse_star"] = round_sig10(mse_star);
  j["u_ad"] = round_sig10(u_ad);
  j["u_dc"] = round_sig10(u_dc);
  j["noise"] = noise.to_json();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : per_eta_table) {
    rows.push_back({{"eta", round_sig10(r.eta)},
                    {"alpha_star", round_sig10(r.alpha_star)},
                    {"mse", round_sig10(r.mse)},
                    {"u_ad", round_sig10(r.u_ad)},
                    {"u_dc", round_sig10(r.u_dc)}});
  }
  j["per_eta_table"] = rows;
  return j;
}

}  // namespace advgame::game
