#include "lie_iekf/noise.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace lie_iekf {

namespace {

enum class Stream : std::uint32_t { Step = 1, Initial = 2 };

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t run, std::uint64_t step, Stream stream) {
  const auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffu); };
  const auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(run), hi(run), lo(step), hi(step), static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

Vec3 draw(std::mt19937_64& engine, double variance) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::sqrt(variance);
  Vec3 out;
  for (int i = 0; i < 3; ++i) out(i) = scale * normal(engine);
  return out;
}

}  // namespace

NoiseSample sample_noise(const SimConfig& cfg, std::size_t run, std::size_t step) {
  if (!cfg.plant_noise) {
    return {Vec3::Zero(), AlgVec::Zero()};
  }
  const double divisor = cfg.noise_mode == NoiseMode::WhiteScaled ? cfg.dt : 1.0;
  auto engine = make_engine(cfg.seed, run, step, Stream::Step);
  NoiseSample out;
  out.w = draw(engine, cfg.q_scale / divisor);
  out.v = draw(engine, cfg.r_scale / divisor);
  return out;
}

InitialSample sample_initial(const SimConfig& cfg, std::size_t run) {
  if (!cfg.random_initial_state) {
    return {AlgVec::Zero(), Vec3::Zero()};
  }
  auto engine = make_engine(cfg.seed, run, 0, Stream::Initial);
  InitialSample out;
  out.v0 = draw(engine, cfg.plant_initial_orientation_var);
  out.w0 = draw(engine, cfg.plant_initial_omega_var);
  return out;
}

}  // namespace lie_iekf
