#pragma once

#include <cstdint>
#include <random>
#include <optional>
#include <variant>
#include <vector>

#include "advgame/game.hpp"
#include "advgame/kernels.hpp"

#include "json.hpp"

namespace advgame::sim {

// Splittable counter hash; chunk i of a run draws from a generator seeded
// with seed XOR splitmix64(i), so results never depend on thread count.
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic random stream: raw mt19937_64 words mapped in-library
// (53-bit uniforms, Box-Muller normals). std::<distribution>s are not
// pinned by the standard and would break bit-reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();      // [0, 1)
  double uniform_pos();  // (0, 1]
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Uniform draw from the solid ball: isotropic direction times r * U^(1/n).
std::vector<double> sample_uniform_ball(geometry::Dim n, double r, Rng& rng);

// Uniform draw from the sphere surface of radius z.
std::vector<double> sample_shell(geometry::Dim n, double z, Rng& rng);

std::vector<double> sample_noise(geometry::Dim n, const game::NoiseSpec& spec, Rng& rng);

// Adversarial magnitude pinned to an arbitrary z (kernel-check mode; not
// constrained to the equilibrium support window).
struct FixedMagnitude {
  double z;
};

struct SimConfig {
  kernels::GameParams params;
  std::variant<game::NoiseSpec, FixedMagnitude> noise;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t chunk_size = 65'536;
  int threads = 0;  // 0 = hardware concurrency; result is thread-count invariant
};

struct SimResult {
  double pa_hat = 0.0;
  double pa_stderr = 0.0;
  std::optional<double> mse_hat;     // empty when nothing was accepted
  std::optional<double> mse_stderr;
  std::uint64_t accepted = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

// Replays the acceptance/estimation pipeline on (N_h, N_a) pairs; the
// ground truth cancels from both statistics and is never sampled.
SimResult run(const SimConfig& config);

}  // namespace advgame::sim
