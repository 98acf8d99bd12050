#include <iostream>
#include <optional>
#include <string>

#include "advgame/cli.hpp"

#include "CLI11.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  advgame::cli::Overrides overrides;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--out", flags.overrides.out, "output directory");
  cmd->add_option("--eta", flags.overrides.eta, "single acceptance threshold (replaces grid)");
  cmd->add_option("--seed", flags.overrides.seed, "simulation seed");
  cmd->add_option("--samples", flags.overrides.samples, "simulation sample count");
  cmd->add_option("--grid", flags.overrides.grid, "sweep grid size");
}

advgame::cli::RunConfig resolve(const CommonFlags& flags) {
  advgame::cli::RunConfig cfg;
  if (!flags.config_path.empty()) {
    cfg = advgame::cli::load_config(flags.config_path);
  } else if (!flags.overrides.eta) {
    throw advgame::cli::ConfigError("need --config FILE (or at least --eta for ad-hoc runs)");
  } else {
    cfg.eta_grid.clear();
  }
  advgame::cli::apply_overrides(cfg, flags.overrides);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stackelberg analysis of threshold-accepted averaging under adversarial noise"};
  app.require_subcommand(1);

  CommonFlags curve_flags;
  CLI::App* curve = app.add_subcommand("curve", "export characteristic curves as CSV");
  add_common(curve, curve_flags);

  CommonFlags eq_flags;
  CLI::App* equilibrium =
      app.add_subcommand("equilibrium", "solve the leader-follower game over the eta grid");
  add_common(equilibrium, eq_flags);

  CommonFlags noise_flags;
  std::optional<double> noise_alpha;
  bool from_equilibrium = false;
  CLI::App* noise = app.add_subcommand("noise", "construct the optimal adversarial noise");
  add_common(noise, noise_flags);
  noise->add_option("--alpha", noise_alpha, "target acceptance probability");
  noise->add_flag("--from-equilibrium", from_equilibrium,
                  "derive (eta, alpha) from the equilibrium solve");

  CommonFlags verify_flags;
  CLI::App* verify = app.add_subcommand("verify", "run the Monte-Carlo and oracle check suites");
  add_common(verify, verify_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (curve->parsed()) return advgame::cli::cmd_curve(resolve(curve_flags));
    if (equilibrium->parsed()) return advgame::cli::cmd_equilibrium(resolve(eq_flags));
    if (noise->parsed()) {
      return advgame::cli::cmd_noise(resolve(noise_flags), noise_alpha, from_equilibrium);
    }
    if (verify->parsed()) return advgame::cli::cmd_verify(resolve(verify_flags));
  } catch (const advgame::cli::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return advgame::cli::kExitIo;
  } catch (const advgame::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return advgame::cli::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return advgame::cli::kExitConfig;
  }
  return advgame::cli::kExitOk;
}
