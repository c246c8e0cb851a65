#pragma once

// Conventional continuous-time EKF on the Euclidean embedding
// R^{3x3} x R^3. State ordering: the nine orientation entries in row-major
// order, then the three body-rate components.

#include <cstddef>

#include "lie_iekf/dynamics.hpp"
#include "lie_iekf/measurement.hpp"
#include "lie_iekf/operators.hpp"
#include "lie_iekf/riccati.hpp"
#include "lie_iekf/so3.hpp"

namespace lie_iekf {

inline constexpr int kEkfDim = 12;
inline constexpr int kEkfOutputDim = 9;

using EkfNoise = NoiseModel<kAlgDim, kEkfOutputDim>;
using EkfGain = LinOp<kEkfDim, kEkfOutputDim>;

struct EkfState {
  Mat3 X = Mat3::Identity();  // not constrained to SO(3)
  Vec3 omega = Vec3::Zero();
  Covariance<kEkfDim> P = Covariance<kEkfDim>::Identity();
  double t = 0.0;
  std::size_t asymmetry_warnings = 0;
};

Vec<9> vec_rowmajor(const Mat3& m);
Mat3 unvec_rowmajor(const Vec<9>& v);

struct EkfJacobians {
  LinOp<kEkfDim, kEkfDim> F;
  LinOp<kEkfOutputDim, kEkfDim> H;
};

/// Jacobian of (X hat(Omega), f(t, Omega)) with respect to (vec X, Omega),
/// and of the linearized output Y ~ X + X hat(v), which reads vec X.
EkfJacobians ekf_jacobians(const Mat3& x, const Vec3& omega, double t, const DynamicsModel& model);

/// Process noise enters the body rate: G = [0; I3].
LinOp<kEkfDim, kAlgDim> ekf_noise_input();

/// Covariance of (vec X, Omega) for X = exp(v0), v0 ~ N(0, s2 I), and
/// Omega ~ N(., velocity_var I). The orientation block is the covariance of
/// vec exp(v0) to fourth order in the standard deviation:
///   (s2 - 5 s2^2 / 3) J J^T + (s2^2 / 2) (Psym + vec(I) vec(I)^T)
/// with J = [vec hat(e_i)] and Psym the projector onto symmetric matrices.
/// It is full rank but not of the form I3 (x) S, so the filter is not left
/// invariant.
Covariance<kEkfDim> ekf_initial_covariance(double orientation_var, double velocity_var);

/// One RK4 step of the coupled estimate/covariance system with correction
/// K (vec Y - vec X), K = P H^T R9^-1. P is symmetrized; X is left in the
/// embedding. Throws DivergenceError on loss of PSD.
EkfState ekf_step(const EkfState& state, const StageMeasurements& y, const DynamicsModel& model,
                  const EkfNoise& noise, double dt);

inline EkfState ekf_step(const EkfState& state, const Rot3& y, const DynamicsModel& model, const EkfNoise& noise,
                         double dt) {
  return ekf_step(state, StageMeasurements::hold(y), model, noise, dt);
}

/// ||X^T X - I||_F
double manifold_violation(const Mat3& x);

}  // namespace lie_iekf
