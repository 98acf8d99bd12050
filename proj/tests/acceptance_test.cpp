// Acceptance suite: runs every criterion end to end at its stated
// tolerance and prints one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "advgame/cli.hpp"
#include "advgame/game.hpp"
#include "advgame/simulate.hpp"
#include "advgame/verify.hpp"

#include "json.hpp"

using namespace advgame;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Scope {
  std::vector<std::string> problems;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
  void within(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s: expected %.6g +/- %.2g, got %.10g", what.c_str(),
                    want, tol, got);
      problems.emplace_back(buf);
    }
  }
  void note(const std::string& text) { notes.push_back(text); }
};

void report(int id, const std::string& label, const Scope& scope, double seconds,
            double budget_seconds) {
  Scope copy = scope;
  if (seconds > budget_seconds) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "runtime %.1fs exceeds the %.0fs budget", seconds,
                  budget_seconds);
    copy.problems.emplace_back(buf);
  }
  const bool pass = copy.problems.empty();
  if (!pass) ++g_failures;
  std::printf("%s criterion %d: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, label.c_str(),
              seconds);
  for (const auto& p : copy.problems) std::printf("       - %s\n", p.c_str());
  for (const auto& n : copy.notes) std::printf("       note: %s\n", n.c_str());
  std::fflush(stdout);
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

json run_equilibrium(const std::string& config_path, const fs::path& out_dir) {
  auto cfg = cli::load_config(config_path);
  cfg.out_dir = out_dir.string();
  if (cli::cmd_equilibrium(cfg) != cli::kExitOk) {
    throw std::runtime_error("cmd_equilibrium failed for " + config_path);
  }
  std::ifstream in(out_dir / "equilibrium.json");
  json j;
  in >> j;
  return j;
}

std::optional<json> table_row(const json& report, double eta) {
  for (const auto& row : report.at("per_eta_table")) {
    if (std::abs(row.at("eta").get<double>() - eta) < 1e-9) return row;
  }
  return std::nullopt;
}

std::string row_summary(const json& row) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "eta=%.3g: alpha=%.6g mse=%.6g u_dc=%.6g",
                row.at("eta").get<double>(), row.at("alpha_star").get<double>(),
                row.at("mse").get<double>(), row.at("u_dc").get<double>());
  return buf;
}

double noise_z(const json& report) {
  const auto& noise = report.at("noise");
  if (noise.at("variant") == "single_shell") return noise.at("z").get<double>();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string config_dir = argc > 1 ? argv[1] : "configs";
  const fs::path work = fs::temp_directory_path() / "advgame_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  json ex1;
  json ex2c1;
  json ex2c2;
  json ex3;

  // ---- Criterion 1: Example 1 equilibrium --------------------------------
  {
    Timer t;
    Scope s;
    ex1 = run_equilibrium(config_dir + "/example1.json", work / "ex1");
    s.expect(std::abs(ex1["eta_star"].get<double>() - 5.0) < 1e-9,
             "eta_star: expected grid value 5.0, got " + ex1["eta_star"].dump());
    s.within(ex1["alpha_star"].get<double>(), 0.7978, 0.002, "PA*");
    s.within(ex1["mse_star"].get<double>(), 5.5401, 0.02, "MSE*");
    s.within(ex1["u_dc"].get<double>(), 14.4049, 0.05, "U_DC*");
    s.expect(ex1["noise"]["variant"] == "single_shell", "noise variant single_shell");
    s.within(noise_z(ex1), 4.4857, 0.005, "noise z");
    report(1, "Example 1 equilibrium (n=2, eta grid 2.0:0.2:8.0)", s, t.seconds(), 30.0);
  }

  // ---- Criterion 2: Example 1 endpoints -----------------------------------
  {
    Timer t;
    Scope s;
    const auto r2 = table_row(ex1, 2.0);
    const auto r8 = table_row(ex1, 8.0);
    s.expect(r2.has_value() && r8.has_value(), "per-eta table has eta = 2.0 and 8.0");
    if (r2) {
      s.within(r2->at("mse").get<double>(), 1.5622, 0.01, "MSE at eta=2");
      s.within(r2->at("alpha_star").get<double>(), 0.4555, 0.002, "PA at eta=2");
    }
    if (r8) {
      s.within(r8->at("mse").get<double>(), 13.2991, 0.05, "MSE at eta=8");
      s.within(r8->at("alpha_star").get<double>(), 0.9419, 0.002, "PA at eta=8");
    }
    report(2, "Example 1 endpoint operating points (eta = 2, 8)", s, t.seconds(), 30.0);
  }

  // ---- Criterion 3: Example 2 (n=25), both cases --------------------------
  {
    Timer t;
    Scope s;
    ex2c1 = run_equilibrium(config_dir + "/example2_case1.json", work / "ex2c1");
    s.expect(std::abs(ex2c1["eta_star"].get<double>() - 4.0) < 1e-9,
             "case 1 eta_star: expected 4.0, got " + ex2c1["eta_star"].dump());
    s.within(ex2c1["mse_star"].get<double>(), 4.2409, 0.02, "case 1 MSE");
    s.within(ex2c1["alpha_star"].get<double>(), 0.5375, 0.002, "case 1 PA");
    s.within(ex2c1["u_dc"].get<double>(), 0.2610, 0.002, "case 1 U_DC");
    s.within(noise_z(ex2c1), 3.8643, 0.005, "case 1 z*");

    ex2c2 = run_equilibrium(config_dir + "/example2_case2.json", work / "ex2c2");
    s.expect(std::abs(ex2c2["eta_star"].get<double>() - 2.0) < 1e-9,
             "case 2 eta_star: expected 2.0, got " + ex2c2["eta_star"].dump());
    s.within(ex2c2["mse_star"].get<double>(), 1.3808, 0.01, "case 2 MSE");
    s.within(ex2c2["alpha_star"].get<double>(), 0.2292, 0.002, "case 2 PA");
    s.within(ex2c2["u_dc"].get<double>(), 0.1660, 0.002, "case 2 U_DC");
    s.within(noise_z(ex2c2), 1.9065, 0.005, "case 2 z*");
    if (const auto row = table_row(ex2c2, 2.0)) {
      s.note("case 2 table row at the published threshold: " + row_summary(*row));
      if (const auto winner = table_row(ex2c2, ex2c2["eta_star"].get<double>())) {
        s.note("case 2 winning row: " + row_summary(*winner));
      }
    }
    report(3, "Example 2 equilibria (n=25, two DC utilities)", s, t.seconds(), 60.0);
  }

  // ---- Criterion 4: Example 3 (n=250) --------------------------------------
  {
    Timer t;
    Scope s;
    ex3 = run_equilibrium(config_dir + "/example3.json", work / "ex3");
    s.expect(std::abs(ex3["eta_star"].get<double>() - 7.4) < 1e-9,
             "eta_star: expected 7.4, got " + ex3["eta_star"].dump());
    s.within(ex3["mse_star"].get<double>(), 13.4655, 0.05, "MSE*");
    s.within(ex3["alpha_star"].get<double>(), 0.8849, 0.003, "PA*");
    s.within(ex3["u_dc"].get<double>(), -3.8231, 0.01, "U_DC*");
    s.within(noise_z(ex3), 7.2574, 0.01, "z*");
    const auto r2 = table_row(ex3, 2.0);
    const auto r8 = table_row(ex3, 8.0);
    if (r2) {
      s.within(r2->at("mse").get<double>(), 1.0567, 0.05, "MSE at eta=2");
      s.within(r2->at("alpha_star").get<double>(), 0.4434, 0.003, "PA at eta=2");
    }
    if (r8) {
      s.within(r8->at("mse").get<double>(), 15.7362, 0.05, "MSE at eta=8");
      s.within(r8->at("alpha_star").get<double>(), 0.8969, 0.003, "PA at eta=8");
    }
    // No overflow/underflow anywhere in the table.
    for (const auto& row : ex3["per_eta_table"]) {
      const double mse = row.at("mse").get<double>();
      const double alpha = row.at("alpha_star").get<double>();
      s.expect(std::isfinite(mse) && mse > 0.0 && std::isfinite(alpha) && alpha > 0.0 &&
                   alpha <= 1.0,
               "finite positive table entries at eta=" + row.at("eta").dump());
    }
    if (const auto row = table_row(ex3, 7.4)) {
      s.note("table row at the published threshold: " + row_summary(*row));
      if (const auto winner = table_row(ex3, ex3["eta_star"].get<double>())) {
        s.note("winning row: " + row_summary(*winner));
      }
    }
    report(4, "Example 3 equilibrium and endpoints (n=250)", s, t.seconds(), 300.0);
  }

  // ---- Criterion 5: closed-form equivalence --------------------------------
  {
    Timer t;
    Scope s;
    for (const auto& c : verify::closed_form_suite(100)) {
      s.expect(c.pass, c.name + ": " + std::to_string(c.distance) + " > bound " +
                           std::to_string(c.bound));
    }
    report(5, "general-N geometry vs 2-D closed forms and n=1 identity", s, t.seconds(),
           60.0);
  }

  // ---- Criterion 6: kernel Monte-Carlo suite -------------------------------
  {
    Timer t;
    Scope s;
    std::vector<std::tuple<int, double, double>> combos;
    for (const int n : {1, 2, 3, 25}) {
      for (const auto& [eta, f] : std::initializer_list<std::pair<double, double>>{
               {2.0, 0.50}, {3.0, 0.35}, {5.0, 0.60}}) {
        combos.emplace_back(n, eta, (eta - 1.0) + f * 2.0);
      }
    }
    const auto checks = verify::kernel_mc_suite(combos, 1.0, 1'000'000, 424242, 4.0, 0);
    int count = 0;
    for (const auto& c : checks) {
      ++count;
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s: %.2f sigma (bound 4)", c.name.c_str(), c.distance);
      s.expect(c.pass, buf);
    }
    s.expect(count == 24, "24 PA/MSE checks over 12 combos");
    report(6, "kernel Monte-Carlo agreement, 12 (n, eta, z) combos at 1e6 samples", s,
           t.seconds(), 120.0);
  }

  // ---- Criterion 7: envelope vs two-point LP oracle ------------------------
  {
    Timer t;
    Scope s;
    const std::vector<double> alphas{0.1, 0.3, 0.5, 0.7, 0.9};
    for (const auto& c : verify::lp_suite(2, 1.0, {2.0, 5.0, 8.0}, alphas, 200, 2e-3)) {
      s.expect(c.pass, c.name + ": rel gap " + std::to_string(c.distance));
    }
    for (const auto& c : verify::lp_suite(2, 1.0, {2.0, 5.0, 8.0}, alphas, 2000, 2e-4)) {
      s.expect(c.pass, c.name + ": rel gap " + std::to_string(c.distance));
    }
    report(7, "two-point LP oracle at 200 points (2e-3) and 2000 points (2e-4)", s,
           t.seconds(), 120.0);
  }

  // ---- Criterion 8: property suites ----------------------------------------
  {
    // 8a: cap complement identity.
    Timer t;
    Scope s;
    double worst = 0.0;
    for (int n : {1, 2, 3, 25, 250}) {
      for (double r : {0.5, 1.0, 8.0}) {
        for (int i = 1; i < 20; ++i) {
          const double c = r * (-1.0 + 0.1 * i);
          const double sum = geometry::cap_fraction(geometry::Dim(n), {r, c}) +
                             geometry::cap_fraction(geometry::Dim(n), {r, -c});
          worst = std::max(worst, std::abs(sum - 1.0));
        }
      }
    }
    s.expect(worst < 1e-12, "complement identity max deviation " + std::to_string(worst));
    report(8, "property: cap complement identity", s, t.seconds(), 60.0);
  }
  {
    // 8b: envelope concavity and dominance.
    Timer t;
    Scope s;
    for (auto [n, eta] : std::initializer_list<std::pair<int, double>>{
             {2, 5.0}, {25, 4.0}, {250, 7.4}}) {
      const kernels::GameParams params{geometry::Dim(n), 1.0, eta};
      const auto locus = frontier::sweep(params, {});
      const auto curve = frontier::upper_concave_envelope(locus, 1e-6);
      double max_psi = 0.0;
      for (const auto& sm : locus.samples) max_psi = std::max(max_psi, sm.psi);
      bool dominated = true;
      for (const auto& sm : locus.samples) {
        dominated = dominated && curve.envelope(sm.q) >= sm.psi - 1e-10 * max_psi;
      }
      s.expect(dominated, "envelope dominates the locus at n=" + std::to_string(n));
      bool concave = true;
      double prev_slope = std::numeric_limits<double>::infinity();
      for (size_t i = 1; i < curve.vertices.size(); ++i) {
        const double slope = (curve.vertices[i].psi - curve.vertices[i - 1].psi) /
                             (curve.vertices[i].q - curve.vertices[i - 1].q);
        concave = concave && slope <= prev_slope + 1e-9 * std::max(1.0, std::abs(prev_slope));
        prev_slope = slope;
      }
      s.expect(concave, "hull slopes non-increasing at n=" + std::to_string(n));
    }
    report(8, "property: envelope concavity and dominance", s, t.seconds(), 60.0);
  }
  {
    // 8c: c_eta monotone in alpha and in eta.
    Timer t;
    Scope s;
    std::vector<frontier::CharacteristicCurve> curves;
    for (double eta : {2.0, 3.0, 5.0, 8.0}) {
      const kernels::GameParams params{geometry::Dim(2), 1.0, eta};
      curves.push_back(frontier::upper_concave_envelope(frontier::sweep(params, {}), 1e-6));
    }
    bool mono_alpha = true;
    for (const auto& curve : curves) {
      double prev = std::numeric_limits<double>::infinity();
      for (int i = 1; i <= 500; ++i) {
        const double c = frontier::c_eta(curve, static_cast<double>(i) / 500.0);
        mono_alpha = mono_alpha && c <= prev * (1 + 1e-12);
        prev = c;
      }
    }
    s.expect(mono_alpha, "c_eta non-increasing in alpha");
    bool mono_eta = true;
    for (int i = 1; i <= 20; ++i) {
      const double alpha = static_cast<double>(i) / 21.0;
      double prev = 0.0;
      for (const auto& curve : curves) {
        const double c = frontier::c_eta(curve, alpha);
        mono_eta = mono_eta && c >= prev * (1 - 1e-12);
        prev = c;
      }
    }
    s.expect(mono_eta, "c_eta non-decreasing in eta at fixed alpha");
    report(8, "property: c_eta monotone in alpha and eta", s, t.seconds(), 60.0);
  }
  {
    // 8d: noise-spec consistency identities.
    Timer t;
    Scope s;
    const kernels::GameParams params{geometry::Dim(2), 1.0, 5.0};
    const auto curve = frontier::upper_concave_envelope(frontier::sweep(params, {}), 1e-6);
    const auto responses =
        game::best_response(curve, game::UtilitySpec::log_linear(1.0, 0.85));
    const double alpha = responses.front();
    const auto noise = game::build_noise(curve, alpha);
    s.expect(noise.is_single(), "example-1 best response is a single shell");
    if (noise.is_single()) {
      const double z = std::get<game::SingleShell>(noise.shape).z;
      s.expect(std::abs(kernels::phi(params, z) - alpha) < 1e-8 * alpha,
               "single shell: Phi(z) = alpha*");
      const double mse = kernels::psi(params, z) / (4.0 * kernels::phi(params, z));
      s.expect(std::abs(mse - frontier::c_eta(curve, alpha)) <
                   1e-8 * frontier::c_eta(curve, alpha),
               "single shell: Psi/(4 Phi) = c_eta(alpha*)");
    }
    frontier::SweepOptions coarse;
    coarse.grid_size = 9;
    coarse.endpoint_refinement = 0;
    const auto coarse_curve =
        frontier::upper_concave_envelope(frontier::sweep(params, coarse), 1e-6);
    const auto& vs = coarse_curve.vertices;
    const double alpha_mix = 0.5 * (vs[vs.size() / 2].q + vs[vs.size() / 2 + 1].q);
    const auto mix_noise = game::build_noise(coarse_curve, alpha_mix);
    s.expect(!mix_noise.is_single(), "coarse chord produces a mixture");
    if (!mix_noise.is_single()) {
      const auto mix = std::get<game::TwoShellMixture>(mix_noise.shape);
      const double pa = mix.beta1 * kernels::phi(params, mix.z1) +
                        mix.beta2 * kernels::phi(params, mix.z2);
      s.expect(std::abs(pa - alpha_mix) < 1e-9, "mixture mean acceptance constraint");
      const double mse = (mix.beta1 * kernels::psi(params, mix.z1) +
                          mix.beta2 * kernels::psi(params, mix.z2)) /
                         (4.0 * alpha_mix);
      s.expect(std::abs(mse - frontier::c_eta(coarse_curve, alpha_mix)) <
                   1e-7 * frontier::c_eta(coarse_curve, alpha_mix),
               "mixture achieves the envelope value");
    }
    report(8, "property: noise-spec consistency identities", s, t.seconds(), 60.0);
  }
  {
    // 8e: simulator determinism under thread-count variation.
    Timer t;
    Scope s;
    const kernels::GameParams params{geometry::Dim(3), 1.0, 4.0};
    sim::SimConfig cfg{params, sim::FixedMagnitude{3.7}, 400'000, 20240601, 9'999, 1};
    const auto a = sim::run(cfg);
    cfg.threads = 4;
    const auto b = sim::run(cfg);
    cfg.threads = 7;
    const auto c = sim::run(cfg);
    s.expect(a.pa_hat == b.pa_hat && a.pa_hat == c.pa_hat, "pa bitwise equal across threads");
    s.expect(a.accepted == b.accepted && a.accepted == c.accepted, "accepted counts equal");
    s.expect(*a.mse_hat == *b.mse_hat && *a.mse_hat == *c.mse_hat,
             "mse bitwise equal across threads");
    report(8, "property: simulator thread-count invariance", s, t.seconds(), 60.0);
  }

  std::printf("%s: %d criterion check(s) failed\n", g_failures == 0 ? "ALL PASS" : "RESULT",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
