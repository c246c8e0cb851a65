#include "lie_iekf/ekf.hpp"

namespace lie_iekf {

Vec<9> vec_rowmajor(const Mat3& m) {
  Vec<9> v;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) v(3 * i + j) = m(i, j);
  }
  return v;
}

Mat3 unvec_rowmajor(const Vec<9>& v) {
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) = v(3 * i + j);
  }
  return m;
}

EkfJacobians ekf_jacobians(const Mat3& x, const Vec3& omega, double t, const DynamicsModel& model) {
  EkfJacobians jac;
  jac.F.setZero();
  // d vec(X hat(Omega)) / d vec X: each row of X is right-multiplied by hat(Omega).
  const Mat3 rt = hat(omega).transpose();
  for (int i = 0; i < 3; ++i) {
    jac.F.block<3, 3>(3 * i, 3 * i) = rt;
  }
  for (int k = 0; k < 3; ++k) {
    jac.F.block<9, 1>(0, 9 + k) = vec_rowmajor(x * hat(Vec3::Unit(k)));
  }
  jac.F.block<3, 3>(9, 9) = model.df(t, omega);

  jac.H.setZero();
  jac.H.leftCols<9>().setIdentity();
  return jac;
}

LinOp<kEkfDim, kAlgDim> ekf_noise_input() {
  LinOp<kEkfDim, kAlgDim> g = LinOp<kEkfDim, kAlgDim>::Zero();
  g.bottomRows<3>().setIdentity();
  return g;
}

Covariance<kEkfDim> ekf_initial_covariance(double orientation_var, double velocity_var) {
  // exp(hat v) = hat(v) (1 - |v|^2 / 6) + (v v^T - |v|^2 I) / 2 + O(|v|^4);
  // Gaussian fourth moments give the covariance of each part.
  const double s2 = orientation_var;
  const double s4 = s2 * s2;
  LinOp<9, 3> j;
  for (int k = 0; k < 3; ++k) j.col(k) = vec_rowmajor(hat(Vec3::Unit(k)));
  LinOp<9, 9> commute = LinOp<9, 9>::Zero();
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) commute(3 * a + b, 3 * b + a) = 1.0;
  }
  const LinOp<9, 9> sym = 0.5 * (LinOp<9, 9>::Identity() + commute);
  const LinOp<9, 1> vec_i = vec_rowmajor(Mat3::Identity());

  Covariance<kEkfDim> p = Covariance<kEkfDim>::Zero();
  p.topLeftCorner<9, 9>() =
      (s2 - 5.0 * s4 / 3.0) * j * j.transpose() + 0.5 * s4 * (sym + vec_i * vec_i.transpose());
  p.bottomRightCorner<3, 3>() = velocity_var * Mat3::Identity();
  return p;
}

namespace {

struct Derivative {
  Mat3 x;
  Vec3 omega;
  Covariance<kEkfDim> p;
};

}  // namespace

EkfState ekf_step(const EkfState& state, const StageMeasurements& y, const DynamicsModel& model,
                  const EkfNoise& noise, double dt) {
  if (!(dt > 0.0)) {
    throw Error("ekf_step: dt must be positive");
  }
  static const LinOp<kEkfDim, kAlgDim> g = ekf_noise_input();

  const auto derivative = [&](const Mat3& x, const Vec3& omega, const Covariance<kEkfDim>& p, double ts,
                              int stage) {
    const EkfJacobians jac = ekf_jacobians(x, omega, ts, model);
    const EkfGain k = gain(p, jac.H, noise);
    const Vec<kEkfDim> correction = k * (vec_rowmajor(y.stage(stage)) - vec_rowmajor(x));
    return Derivative{x * hat(omega) + unvec_rowmajor(correction.head<9>()),
                      model.f(ts, omega) + correction.tail<3>(), riccati_rhs(p, jac.F, g, jac.H, noise)};
  };

  const double t = state.t;
  const double half = 0.5 * dt;
  const Derivative d1 = derivative(state.X, state.omega, state.P, t, 0);
  const Derivative d2 =
      derivative(state.X + half * d1.x, state.omega + half * d1.omega, state.P + half * d1.p, t + half, 1);
  const Derivative d3 =
      derivative(state.X + half * d2.x, state.omega + half * d2.omega, state.P + half * d2.p, t + half, 2);
  const Derivative d4 = derivative(state.X + dt * d3.x, state.omega + dt * d3.omega, state.P + dt * d3.p, t + dt, 3);

  const double w = dt / 6.0;
  EkfState next;
  next.X = state.X + w * (d1.x + 2.0 * d2.x + 2.0 * d3.x + d4.x);
  next.omega = state.omega + w * (d1.omega + 2.0 * d2.omega + 2.0 * d3.omega + d4.omega);
  if (!next.X.allFinite() || !next.omega.allFinite()) {
    throw DivergenceError("ekf_step: state estimate became non-finite");
  }
  const Covariance<kEkfDim> p_next = state.P + w * (d1.p + 2.0 * d2.p + 2.0 * d3.p + d4.p);
  next.asymmetry_warnings = state.asymmetry_warnings + (asymmetry(p_next) > kAsymmetryWarnTol ? 1 : 0);
  next.P = symmetrize(p_next);
  check_psd(next.P, "ekf_step");
  next.t = t + dt;
  return next;
}

double manifold_violation(const Mat3& x) { return (x.transpose() * x - Mat3::Identity()).norm(); }

}  // namespace lie_iekf
