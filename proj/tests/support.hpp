#pragma once

#include <Eigen/Dense>
#include <random>

#include "lie_iekf/harness.hpp"
#include "lie_iekf/so3.hpp"

namespace lie_iekf::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(12345);
  return engine;
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = n(rng());
  return m;
}

template <int R, int C>
Eigen::Matrix<double, R, C> random_fixed(double scale = 1.0) {
  return random_matrix(R, C, scale);
}

inline Vec3 random_vec3(double scale = 1.0) { return random_fixed<3, 1>(scale); }

inline Rot3 random_rotation() { return exp_so3(random_vec3(1.5)); }

template <int N>
Eigen::Matrix<double, N, N> random_psd(double scale = 1.0) {
  const Eigen::Matrix<double, N, N> a = random_fixed<N, N>(scale);
  return a * a.transpose();
}

template <int N>
Eigen::Matrix<double, N, N> random_pd(double floor = 0.1) {
  return random_psd<N>() + floor * Eigen::Matrix<double, N, N>::Identity();
}

// Truncated power series of the matrix exponential.
inline Mat3 exp_series(const Mat3& a, int terms = 30) {
  Mat3 sum = Mat3::Identity();
  Mat3 term = Mat3::Identity();
  for (int k = 1; k < terms; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

inline Vec3 cross_componentwise(const Vec3& a, const Vec3& b) {
  return Vec3(a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(), a.x() * b.y() - a.y() * b.x());
}

// Config for a noiseless plant starting at (I, (2,0,1)) with the filter
// initialized on it.
inline SimConfig exact_config() {
  SimConfig cfg;
  cfg.plant_noise = false;
  cfg.random_initial_state = false;
  cfg.filter_initial_omega = cfg.plant_initial_omega_mean;
  return cfg;
}

// Copy of `plant` with every orientation left-translated by q.
inline PlantTrajectory translate(const PlantTrajectory& plant, const Rot3& q) {
  PlantTrajectory out = plant;
  for (auto& s : out.states) s.X = q * s.X;
  for (auto& stages : out.stage_orientation)
    for (auto& m : stages) m = q.matrix() * m;
  return out;
}

}  // namespace lie_iekf::test
