#pragma once

#include <cstddef>

#include "lie_iekf/sim_config.hpp"
#include "lie_iekf/so3.hpp"

namespace lie_iekf {

struct NoiseSample {
  Vec3 w;    // process noise on the body rate
  AlgVec v;  // measurement noise on the algebra
};

/// Deterministic in (cfg.seed, run, step): every draw comes from a generator
/// seeded from that triple alone, so runs and steps can be evaluated in any
/// order or in parallel. Returns zeros when cfg.plant_noise is false.
NoiseSample sample_noise(const SimConfig& cfg, std::size_t run, std::size_t step);

struct InitialSample {
  AlgVec v0;  // X(0) = exp(v0)
  Vec3 w0;    // Omega(0) = mean + w0
};

/// Initial plant perturbation for `run`, drawn from a stream disjoint from
/// every per-step stream. Zero when cfg.random_initial_state is false.
InitialSample sample_initial(const SimConfig& cfg, std::size_t run);

}  // namespace lie_iekf
