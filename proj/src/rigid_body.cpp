#include "lie_iekf/rigid_body.hpp"

#include <cmath>
#include <utility>

#include "lie_iekf/error.hpp"

namespace lie_iekf {

Inertia::Inertia(const Mat3& m) : m_(m) {
  if (!m.allFinite() || (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error("Inertia: matrix must be finite and symmetric");
  }
  const Eigen::LLT<Mat3> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error("Inertia: matrix must be positive definite");
  }
  inv_ = m.inverse();
}

Vec3 f_euler(const Inertia& inertia, const Vec3& omega, const Vec3& u) {
  return inertia.inverse() * ((inertia.matrix() * omega).cross(omega) + u);
}

Mat3 df_domega(const Inertia& inertia, const Vec3& omega) {
  return inertia.inverse() * (hat(inertia.matrix() * omega) - hat(omega) * inertia.matrix());
}

Vec3 reference_rate(double t) {
  const double s = std::sin(t);
  const double c = std::cos(t);
  return Vec3(1.0 + c, s - s * c, c + s * s);
}

Vec3 reference_rate_derivative(double t) {
  const double s = std::sin(t);
  const double c = std::cos(t);
  return Vec3(-s, c - std::cos(2.0 * t), -s + std::sin(2.0 * t));
}

Vec3 reference_control(const Inertia& inertia, double t) {
  const Vec3 g = reference_rate(t);
  return inertia.matrix() * reference_rate_derivative(t) - (inertia.matrix() * g).cross(g);
}

DynamicsModel rigid_body_model(const Inertia& inertia, ControlFn control) {
  DynamicsModel model;
  model.f = [inertia, control = std::move(control)](double t, const AlgVec& eta) {
    return f_euler(inertia, eta, control(t));
  };
  model.df = [inertia](double, const AlgVec& eta) { return df_domega(inertia, eta); };
  return model;
}

PlantStep plant_step_stages(const PlantState& state, const Inertia& inertia, const ControlFn& control,
                            const Vec3& w, double dt) {
  if (!(dt > 0.0)) {
    throw Error("plant_step: dt must be positive");
  }
  const double t = state.t;
  const double half = 0.5 * dt;
  const Mat3& x0 = state.X.matrix();
  const Vec3& w0 = state.omega;

  const auto omega_dot = [&](double ts, const Vec3& om) { return Vec3(f_euler(inertia, om, control(ts)) + w); };

  PlantStep out;
  out.stage_orientation[0] = x0;
  const Mat3 kx1 = x0 * hat(w0);
  const Vec3 kw1 = omega_dot(t, w0);

  out.stage_orientation[1] = x0 + half * kx1;
  const Vec3 w1 = w0 + half * kw1;
  const Mat3 kx2 = out.stage_orientation[1] * hat(w1);
  const Vec3 kw2 = omega_dot(t + half, w1);

  out.stage_orientation[2] = x0 + half * kx2;
  const Vec3 w2 = w0 + half * kw2;
  const Mat3 kx3 = out.stage_orientation[2] * hat(w2);
  const Vec3 kw3 = omega_dot(t + half, w2);

  out.stage_orientation[3] = x0 + dt * kx3;
  const Vec3 w3 = w0 + dt * kw3;
  const Mat3 kx4 = out.stage_orientation[3] * hat(w3);
  const Vec3 kw4 = omega_dot(t + dt, w3);

  out.next.X = renormalize(x0 + (dt / 6.0) * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4));
  out.next.omega = w0 + (dt / 6.0) * (kw1 + 2.0 * kw2 + 2.0 * kw3 + kw4);
  out.next.t = t + dt;
  return out;
}

PlantState plant_step(const PlantState& state, const Inertia& inertia, const ControlFn& control, const Vec3& w,
                      double dt) {
  return plant_step_stages(state, inertia, control, w, dt).next;
}

Rot3 measure(const PlantState& state, const AlgVec& v) { return state.X * exp_so3(v); }

}  // namespace lie_iekf
