#include "advgame/simulate.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace advgame::sim {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform_pos() { return 1.0 - uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_pos();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::vector<double> sample_shell(geometry::Dim n, double z, Rng& rng) {
  if (!(z > 0.0)) throw std::domain_error("shell radius must be positive");
  std::vector<double> v(n.value());
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& x : v) {
      x = rng.normal();
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  const double scale = z / std::sqrt(norm2);
  for (double& x : v) x *= scale;
  return v;
}

std::vector<double> sample_uniform_ball(geometry::Dim n, double r, Rng& rng) {
  if (!(r > 0.0)) throw std::domain_error("ball radius must be positive");
  std::vector<double> v = sample_shell(n, r, rng);
  const double u = rng.uniform_pos();
  const double scale = std::pow(u, 1.0 / n.value());
  for (double& x : v) x *= scale;
  return v;
}

std::vector<double> sample_noise(geometry::Dim n, const game::NoiseSpec& spec, Rng& rng) {
  if (const auto* s = std::get_if<game::SingleShell>(&spec.shape)) {
    return sample_shell(n, s->z, rng);
  }
  const auto& m = std::get<game::TwoShellMixture>(spec.shape);
  const double z = rng.uniform() < m.beta1 ? m.z1 : m.z2;
  return sample_shell(n, z, rng);
}

namespace {

struct ChunkStats {
  std::uint64_t count = 0;
  std::uint64_t accepted = 0;
  double err_sum = 0.0;
  double err_sq_sum = 0.0;
};

ChunkStats run_chunk(const SimConfig& cfg, std::uint64_t chunk_index, std::uint64_t count) {
  Rng rng(cfg.seed ^ splitmix64(chunk_index));
  const int n = cfg.params.n.value();
  const double accept2 =
      cfg.params.eta * cfg.params.delta * cfg.params.eta * cfg.params.delta;
  ChunkStats stats;
  stats.count = count;
  std::vector<double> nh;
  std::vector<double> na;
  for (std::uint64_t i = 0; i < count; ++i) {
    nh = sample_uniform_ball(cfg.params.n, cfg.params.delta, rng);
    if (const auto* fixed = std::get_if<FixedMagnitude>(&cfg.noise)) {
      na = sample_shell(cfg.params.n, fixed->z, rng);
    } else {
      na = sample_noise(cfg.params.n, std::get<game::NoiseSpec>(cfg.noise), rng);
    }
    double dist2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = nh[k] - na[k];
      dist2 += d * d;
    }
    if (dist2 <= accept2) {
      double err = 0.0;
      for (int k = 0; k < n; ++k) {
        const double m = 0.5 * (nh[k] + na[k]);
        err += m * m;
      }
      ++stats.accepted;
      stats.err_sum += err;
      stats.err_sq_sum += err * err;
    }
  }
  return stats;
}

}  // namespace

SimResult run(const SimConfig& cfg) {
  if (cfg.samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (cfg.chunk_size < 1) throw std::invalid_argument("chunk_size must be >= 1");
  if (const auto* fixed = std::get_if<FixedMagnitude>(&cfg.noise)) {
    if (!(fixed->z > 0.0)) throw std::invalid_argument("fixed magnitude must be positive");
  }

  const std::uint64_t n_chunks = (cfg.samples + cfg.chunk_size - 1) / cfg.chunk_size;
  std::vector<ChunkStats> stats(n_chunks);

  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_chunks));

  auto chunk_count = [&](std::uint64_t i) {
    const std::uint64_t begin = i * cfg.chunk_size;
    return std::min<std::uint64_t>(cfg.chunk_size, cfg.samples - begin);
  };

  if (workers <= 1) {
    for (std::uint64_t i = 0; i < n_chunks; ++i) stats[i] = run_chunk(cfg, i, chunk_count(i));
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t i = next.fetch_add(1); i < n_chunks; i = next.fetch_add(1)) {
          stats[i] = run_chunk(cfg, i, chunk_count(i));
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  // Fixed-order reduction over per-chunk sums: identical for any worker
  // count.
  std::uint64_t accepted = 0;
  double err_sum = 0.0;
  double err_sq_sum = 0.0;
  for (const ChunkStats& s : stats) {
    accepted += s.accepted;
    err_sum += s.err_sum;
    err_sq_sum += s.err_sq_sum;
  }

  SimResult res;
  res.samples = cfg.samples;
  res.seed = cfg.seed;
  res.accepted = accepted;
  const double total = static_cast<double>(cfg.samples);
  res.pa_hat = static_cast<double>(accepted) / total;
  res.pa_stderr = std::sqrt(res.pa_hat * (1.0 - res.pa_hat) / total);
  if (accepted > 0) {
    const double mean = err_sum / static_cast<double>(accepted);
    res.mse_hat = mean;
    if (accepted > 1) {
      const double var = std::max(
          0.0, (err_sq_sum - static_cast<double>(accepted) * mean * mean) /
                   static_cast<double>(accepted - 1));
      res.mse_stderr = std::sqrt(var / static_cast<double>(accepted));
    }
  }
  return res;
}

nlohmann::json SimResult::to_json() const {
  nlohmann::json j;
  j["pa_hat"] = game::round_sig10(pa_hat);
  j["pa_stderr"] = game::round_sig10(pa_stderr);
  j["mse_hat"] = mse_hat ? nlohmann::json(game::round_sig10(*mse_hat)) : nlohmann::json();
  j["mse_stderr"] =
      mse_stderr ? nlohmann::json(game::round_sig10(*mse_stderr)) : nlohmann::json();
  j["accepted"] = accepted;
  j["samples"] = samples;
  j["seed"] = seed;
  return j;
}

}  // namespace advgame::sim
