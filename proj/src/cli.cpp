#include "advgame/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace advgame::cli {

namespace fs = std::filesystem;

namespace {

game::UtilitySpec parse_utility(const nlohmann::json& j, const std::string& role) {
  if (!j.is_object() || !j.contains("form")) {
    throw ConfigError("utilities." + role + " must be an object with a \"form\" field");
  }
  const std::string form = j.at("form").get<std::string>();
  game::UtilitySpec spec;
  if (form == "log_linear" || form == "linear") {
    spec.form = form == "linear" ? game::UtilityForm::kLinear : game::UtilityForm::kLogLinear;
    if (!j.contains("a") || !j.contains("b")) {
      throw ConfigError("utilities." + role + ": form \"" + form + "\" needs fields a and b");
    }
    spec.a = j.at("a").get<double>();
    spec.b = j.at("b").get<double>();
  } else if (form == "ratio") {
    spec.form = game::UtilityForm::kRatio;
    if (!j.contains("p")) throw ConfigError("utilities." + role + ": ratio form needs field p");
    spec.p = j.at("p").get<double>();
  } else {
    throw ConfigError("utilities." + role + ": unknown form \"" + form +
                      "\" (expected log_linear | linear | ratio)");
  }
  return spec;
}

std::vector<double> parse_eta_grid(const nlohmann::json& game_obj) {
  std::vector<double> etas;
  if (game_obj.contains("eta")) {
    etas.push_back(game_obj.at("eta").get<double>());
  } else if (game_obj.contains("eta_grid")) {
    const auto& g = game_obj.at("eta_grid");
    if (g.is_array()) {
      for (const auto& v : g) etas.push_back(v.get<double>());
    } else if (g.is_object()) {
      const double start = g.at("start").get<double>();
      const double stop = g.at("stop").get<double>();
      const double step = g.at("step").get<double>();
      if (!(step > 0.0) || stop < start) {
        throw ConfigError("game.eta_grid: need step > 0 and stop >= start");
      }
      const int count = static_cast<int>(std::round((stop - start) / step)) + 1;
      for (int i = 0; i < count; ++i) etas.push_back(start + i * step);
    } else {
      throw ConfigError("game.eta_grid must be an array or {start, stop, step}");
    }
  } else {
    throw ConfigError("game must specify eta or eta_grid");
  }
  return etas;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string eta_tag(double eta) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", game::round_sig10(eta));
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::vector<double> alpha_rows(const RunConfig& cfg) {
  std::vector<double> alphas(cfg.curve_points);
  const double lo = cfg.sweep.alpha_min;
  for (int i = 0; i < cfg.curve_points; ++i) {
    alphas[i] = lo + (1.0 - lo) * (i + 1) / cfg.curve_points;
  }
  return alphas;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

RunConfig parse_config(const nlohmann::json& j) {
  RunConfig cfg;
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  if (!j.contains("game")) throw ConfigError("config needs a \"game\" section");
  const auto& g = j.at("game");
  cfg.n = g.at("n").get<int>();
  cfg.delta = g.value("delta", 1.0);
  cfg.eta_grid = parse_eta_grid(g);

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    cfg.sweep.grid_size = s.value("grid_size", cfg.sweep.grid_size);
    cfg.sweep.alpha_min = s.value("alpha_min", cfg.sweep.alpha_min);
    cfg.sweep.endpoint_refinement = s.value("endpoint_refinement", cfg.sweep.endpoint_refinement);
    cfg.sweep.endpoint_window = s.value("endpoint_window", cfg.sweep.endpoint_window);
    cfg.curve_points = s.value("curve_points", cfg.curve_points);
  }
  if (j.contains("utilities")) {
    const auto& u = j.at("utilities");
    if (u.contains("adversary")) cfg.adversary = parse_utility(u.at("adversary"), "adversary");
    if (u.contains("dc")) cfg.dc = parse_utility(u.at("dc"), "dc");
  }
  if (j.contains("sim")) {
    const auto& s = j.at("sim");
    cfg.sim_samples = s.value("samples", cfg.sim_samples);
    cfg.sim_seed = s.value("seed", cfg.sim_seed);
    cfg.sim_chunk = s.value("chunk_size", cfg.sim_chunk);
    cfg.sim_threads = s.value("threads", cfg.sim_threads);
  }
  if (j.contains("output")) {
    cfg.out_dir = j.at("output").value("dir", cfg.out_dir);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

void apply_overrides(RunConfig& cfg, const Overrides& ovr) {
  if (ovr.eta) cfg.eta_grid = {*ovr.eta};
  if (ovr.seed) cfg.sim_seed = *ovr.seed;
  if (ovr.samples) cfg.sim_samples = *ovr.samples;
  if (ovr.grid) cfg.sweep.grid_size = *ovr.grid;
  if (ovr.out) cfg.out_dir = *ovr.out;
}

void validate_config(const RunConfig& cfg, bool need_utilities) {
  if (cfg.n < 1) throw ConfigError("game.n must be >= 1");
  if (!(cfg.delta > 0.0)) throw ConfigError("game.delta must be positive");
  if (cfg.eta_grid.empty()) throw ConfigError("eta grid is empty");
  for (const double eta : cfg.eta_grid) {
    if (!(eta >= 2.0)) {
      throw ConfigError(
          "eta = " + std::to_string(eta) +
          " rejected: the acceptance-policy floor is eta >= 2 (two honest reports may "
          "legitimately differ by up to 2*delta)");
    }
  }
  if (cfg.sweep.grid_size < 3) throw ConfigError("sweep.grid_size must be >= 3");
  if (!(cfg.sweep.alpha_min > 0.0) || cfg.sweep.alpha_min >= 1.0) {
    throw ConfigError("sweep.alpha_min must lie in (0, 1)");
  }
  if (cfg.curve_points < 2) throw ConfigError("sweep.curve_points must be >= 2");
  if (cfg.sim_samples < 1) throw ConfigError("sim.samples must be >= 1");
  if (cfg.sim_chunk < 1) throw ConfigError("sim.chunk_size must be >= 1");
  try {
    if (cfg.adversary) game::validate_adversary_utility(*cfg.adversary);
    if (cfg.dc) game::validate_dc_utility(*cfg.dc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (need_utilities && (!cfg.adversary || !cfg.dc)) {
    throw ConfigError("this command needs both utilities.adversary and utilities.dc");
  }
}

int cmd_curve(const RunConfig& cfg) {
  validate_config(cfg, /*need_utilities=*/false);
  if (cfg.adversary) game::validate_adversary_utility(*cfg.adversary);

  const geometry::Dim n(cfg.n);
  const auto alphas = alpha_rows(cfg);

  struct Built {
    double eta;
    frontier::CharacteristicCurve curve;
  };
  std::vector<Built> curves;
  curves.reserve(cfg.eta_grid.size());
  std::vector<double> etas = cfg.eta_grid;
  std::sort(etas.begin(), etas.end());
  for (const double eta : etas) {
    const kernels::GameParams params(n, cfg.delta, eta);
    curves.push_back(
        {eta, frontier::upper_concave_envelope(frontier::sweep(params, cfg.sweep),
                                               cfg.sweep.alpha_min)});
  }

  ensure_dir(cfg.out_dir);
  auto combined = open_out(fs::path(cfg.out_dir) / "curves.csv");
  combined << "alpha,c_eta,eta,n,delta\n";
  for (const auto& built : curves) {
    auto out = open_out(fs::path(cfg.out_dir) / ("curve_eta_" + eta_tag(built.eta) + ".csv"));
    frontier::write_curve_csv(out, built.curve, alphas);
    for (const double a : alphas) {
      combined << fmt_double(a) << ',' << fmt_double(frontier::c_eta(built.curve, a)) << ','
               << fmt_double(built.eta) << ',' << cfg.n << ',' << fmt_double(cfg.delta) << '\n';
    }
  }

  if (cfg.adversary && cfg.dc) {
    auto dots = open_out(fs::path(cfg.out_dir) / "best_response.csv");
    dots << "eta,alpha_star,mse,u_ad,u_dc\n";
    for (const auto& built : curves) {
      const auto responses = game::best_response(built.curve, *cfg.adversary);
      const auto [alpha, u_dc] = game::worst_case_dc_value(built.curve, responses, *cfg.dc);
      const double mse = frontier::c_eta(built.curve, alpha);
      dots << fmt_double(built.eta) << ',' << fmt_double(alpha) << ',' << fmt_double(mse) << ','
           << fmt_double(game::evaluate_utility(*cfg.adversary, mse, alpha)) << ','
           << fmt_double(u_dc) << '\n';
    }
  }
  std::cout << "wrote " << curves.size() << " curve file(s) under " << cfg.out_dir << "\n";
  return kExitOk;
}

int cmd_equilibrium(const RunConfig& cfg) {
  validate_config(cfg, /*need_utilities=*/true);
  const auto report = game::optimal_eta(geometry::Dim(cfg.n), cfg.delta, cfg.eta_grid,
                                        *cfg.adversary, *cfg.dc, cfg.sweep);
  ensure_dir(cfg.out_dir);
  write_json(fs::path(cfg.out_dir) / "equilibrium.json", report.to_json());
  std::cout << "eta_star=" << game::round_sig10(report.eta_star)
            << " alpha_star=" << game::round_sig10(report.alpha_star)
            << " mse_star=" << game::round_sig10(report.mse_star)
            << " u_dc=" << game::round_sig10(report.u_dc) << "\n";
  return kExitOk;
}

int cmd_noise(const RunConfig& cfg, std::optional<double> alpha, bool from_equilibrium) {
  validate_config(cfg, /*need_utilities=*/from_equilibrium);
  if (!from_equilibrium && !alpha) {
    throw ConfigError("noise needs --alpha X or --from-equilibrium");
  }

  double eta = 0.0;
  double alpha_star = 0.0;
  if (from_equilibrium) {
    const auto report = game::optimal_eta(geometry::Dim(cfg.n), cfg.delta, cfg.eta_grid,
                                          *cfg.adversary, *cfg.dc, cfg.sweep);
    eta = report.eta_star;
    alpha_star = report.alpha_star;
  } else {
    if (cfg.eta_grid.size() != 1) {
      throw ConfigError("noise with --alpha needs a single eta (use game.eta or --eta)");
    }
    eta = cfg.eta_grid.front();
    alpha_star = *alpha;
    if (!(alpha_star > cfg.sweep.alpha_min) || alpha_star > 1.0) {
      throw ConfigError("--alpha outside (" + std::to_string(cfg.sweep.alpha_min) + ", 1]");
    }
  }

  const kernels::GameParams params(geometry::Dim(cfg.n), cfg.delta, eta);
  const auto curve = frontier::upper_concave_envelope(frontier::sweep(params, cfg.sweep),
                                                      cfg.sweep.alpha_min);
  const auto noise = game::build_noise(curve, alpha_star);

  nlohmann::json j = noise.to_json();
  j["eta"] = game::round_sig10(eta);
  j["alpha"] = game::round_sig10(alpha_star);
  ensure_dir(cfg.out_dir);
  write_json(fs::path(cfg.out_dir) / "noise.json", j);
  std::cout << j.dump() << "\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  validate_config(cfg, /*need_utilities=*/false);

  std::vector<verify::Check> checks;

  // Kernel agreement: empirical PA / conditional MSE vs Phi / Psi at
  // pinned magnitudes across dimensions.
  std::vector<std::tuple<int, double, double>> combos;
  for (const int n : {1, 2, 3, 25}) {
    for (const auto& [eta, f] : std::initializer_list<std::pair<double, double>>{
             {2.0, 0.50}, {3.0, 0.35}, {5.0, 0.60}}) {
      const double lo = (eta - 1.0) * cfg.delta;
      const double hi = (eta + 1.0) * cfg.delta;
      combos.emplace_back(n, eta, lo + f * (hi - lo));
    }
  }
  auto mc = verify::kernel_mc_suite(combos, cfg.delta, cfg.sim_samples, cfg.sim_seed, 4.0,
                                    cfg.sim_threads);
  checks.insert(checks.end(), mc.begin(), mc.end());

  auto cf = verify::closed_form_suite(100);
  checks.insert(checks.end(), cf.begin(), cf.end());

  auto quad = verify::quadrature_suite();
  checks.insert(checks.end(), quad.begin(), quad.end());

  auto lp = verify::lp_suite(2, cfg.delta, {2.0, 5.0, 8.0}, {0.1, 0.3, 0.5, 0.7, 0.9}, 200,
                             2e-3, cfg.sweep);
  checks.insert(checks.end(), lp.begin(), lp.end());

  for (const auto& c : checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": expected "
              << game::round_sig10(c.expected) << ", observed " << game::round_sig10(c.observed)
              << ", distance " << game::round_sig10(c.distance) << " (bound " << c.bound << ")\n";
  }

  ensure_dir(cfg.out_dir);
  nlohmann::json j;
  j["checks"] = verify::checks_to_json(checks);
  j["all_pass"] = verify::all_pass(checks);
  write_json(fs::path(cfg.out_dir) / "verification.json", j);

  return verify::all_pass(checks) ? kExitOk : kExitVerifyFailed;
}

}  // namespace advgame::cli
