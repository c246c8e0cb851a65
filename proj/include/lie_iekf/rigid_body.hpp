#pragma once

#include <array>
#include <functional>

#include "lie_iekf/dynamics.hpp"
#include "lie_iekf/so3.hpp"

namespace lie_iekf {

/// Symmetric positive-definite moment of inertia (kg m^2) with its inverse.
class Inertia {
 public:
  /// Throws lie_iekf::Error unless `m` is symmetric within 1e-12 and
  /// positive definite.
  explicit Inertia(const Mat3& m);

  static Inertia diagonal(const Vec3& d) { return Inertia(d.asDiagonal().toDenseMatrix()); }

  const Mat3& matrix() const { return m_; }
  const Mat3& inverse() const { return inv_; }

 private:
  Mat3 m_;
  Mat3 inv_;
};

/// Euler's equation: I^-1 ((I omega) x omega + u).
Vec3 f_euler(const Inertia& inertia, const Vec3& omega, const Vec3& u);

/// d f_euler / d omega = I^-1 (hat(I omega) - hat(omega) I).
Mat3 df_domega(const Inertia& inertia, const Vec3& omega);

/// Reference body rate
///   gamma(t) = (1 + cos t, sin t - sin t cos t, cos t + sin^2 t)
/// and its analytic derivative.
Vec3 reference_rate(double t);
Vec3 reference_rate_derivative(double t);

/// u(t) = I gamma_dot(t) - (I gamma(t)) x gamma(t). Under this torque gamma
/// solves the noiseless Euler equation exactly.
Vec3 reference_control(const Inertia& inertia, double t);

using ControlFn = std::function<Vec3(double)>;

/// f(t, eta) = f_euler(inertia, eta, u(t)) with df = df_domega.
DynamicsModel rigid_body_model(const Inertia& inertia, ControlFn control);

struct PlantState {
  Rot3 X;
  Vec3 omega = Vec3::Zero();
  double t = 0.0;
};

/// Plant step together with the orientation iterate entering each of the
/// four RK4 stages (before renormalization).
struct PlantStep {
  PlantState next;
  std::array<Mat3, 4> stage_orientation;
};

/// One RK4 step of X_dot = X hat(Omega), Omega_dot = f_euler + w with the
/// process noise sample `w` held over the step. X is renormalized afterwards.
PlantStep plant_step_stages(const PlantState& state, const Inertia& inertia, const ControlFn& control,
                            const Vec3& w, double dt);

PlantState plant_step(const PlantState& state, const Inertia& inertia, const ControlFn& control, const Vec3& w,
                      double dt);

/// Y = X exp(v)
Rot3 measure(const PlantState& state, const AlgVec& v);

}  // namespace lie_iekf
