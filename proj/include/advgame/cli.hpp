#pragma once

#include <optional>
#include <string>
#include <vector>

#include "advgame/game.hpp"
#include "advgame/verify.hpp"

#include "json.hpp"

namespace advgame::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int n = 2;
  double delta = 1.0;
  std::vector<double> eta_grid;

  frontier::SweepOptions sweep;
  int curve_points = 1001;  // alpha rows per exported curve

  std::optional<game::UtilitySpec> adversary;
  std::optional<game::UtilitySpec> dc;

  std::uint64_t sim_samples = 1'000'000;
  std::uint64_t sim_seed = 0x5EEDULL;
  std::uint64_t sim_chunk = 65'536;
  int sim_threads = 0;

  std::string out_dir = "out";
};

// Flag values take precedence over file values, which take precedence
// over defaults.
struct Overrides {
  std::optional<double> eta;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::optional<int> grid;
  std::optional<std::string> out;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
void apply_overrides(RunConfig& cfg, const Overrides& ovr);

// Full validation of every module-level invariant; throws ConfigError.
// Commands validate before writing anything.
void validate_config(const RunConfig& cfg, bool need_utilities);

int cmd_curve(const RunConfig& cfg);
int cmd_equilibrium(const RunConfig& cfg);
int cmd_noise(const RunConfig& cfg, std::optional<double> alpha, bool from_equilibrium);
int cmd_verify(const RunConfig& cfg);

}  // namespace advgame::cli
