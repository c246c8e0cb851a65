#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "lie_iekf/so3.hpp"

namespace lie_iekf {

/// How continuous white noise is turned into per-step samples.
///  - PerSample: w_k ~ N(0, Q), v_k ~ N(0, R), held over one step.
///  - WhiteScaled: w_k ~ N(0, Q / dt), v_k ~ N(0, R / dt).
enum class NoiseMode { PerSample, WhiteScaled };

enum class FilterSelection { Iekf, Ekf, Both };

std::string_view to_string(NoiseMode mode);
std::string_view to_string(FilterSelection selection);
NoiseMode parse_noise_mode(std::string_view text);
FilterSelection parse_filter_selection(std::string_view text);

/// Experiment parameters. Defaults reproduce the reference rigid-body
/// scenario: diag(4.250, 4.337, 3.664) inertia, Q = 2 I, R = 0.3 I,
/// dt = 0.02 s over 10 s.
struct SimConfig {
  Vec3 inertia_diag{4.250, 4.337, 3.664};
  double q_scale = 2.0;
  double r_scale = 0.3;

  // Initial filter covariance blocks, as multiples of the identity.
  double sigma0_orientation = 0.06;
  double sigma0_velocity = 0.4;

  Mat3 filter_initial_orientation = Mat3::Identity();
  Vec3 filter_initial_omega{2.1, 0.4, 1.2};

  // Plant initial state: X(0) = exp(v0), Omega(0) = mean + w0.
  Vec3 plant_initial_omega_mean{2.0, 0.0, 1.0};
  double plant_initial_orientation_var = 0.06;
  double plant_initial_omega_var = 0.4;
  bool random_initial_state = true;
  bool plant_noise = true;

  // Isotropic variance of the 9-dim residual seen by the embedded EKF.
  double ekf_measurement_var = 0.3;

  double dt = 0.02;
  double horizon = 10.0;
  std::size_t runs = 500;
  std::size_t run_offset = 0;
  std::uint64_t seed = 42;
  NoiseMode noise_mode = NoiseMode::PerSample;
  FilterSelection filter = FilterSelection::Both;

  /// Number of integration steps, round(horizon / dt).
  std::size_t steps() const;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// Parses a JSON document whose keys mirror SimConfig fields. Missing keys
/// keep their defaults; unknown keys are rejected.
SimConfig parse_config(std::string_view json_text, SimConfig base = {});
SimConfig load_config(const std::string& path, SimConfig base = {});
std::string config_to_json(const SimConfig& cfg);

}  // namespace lie_iekf
