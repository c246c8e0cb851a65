#include "lie_iekf/iekf.hpp"

namespace lie_iekf {

AlgVec innovation(const Mat3& y, const Mat3& h) {
  return project_skew(y.transpose() * h - Mat3::Identity());
}

IekfTangent iekf_rhs(const Mat3& h, const AlgVec& eta, double t, const Mat3& y, const DynamicsModel& model,
                     const IekfGain& k) {
  const StateVec correction = k * innovation(y, h);
  return {h * hat(eta - correction.head<3>()), model.f(t, eta) - correction.tail<3>()};
}

namespace {

struct Derivative {
  Mat3 h;
  AlgVec eta;
  Covariance<kStateDim> sigma;
};

}  // namespace

IekfState iekf_step(const IekfState& state, const StageMeasurements& y, const DynamicsModel& model,
                    const IekfNoise& noise, double dt) {
  if (!(dt > 0.0)) {
    throw Error("iekf_step: dt must be positive");
  }
  static const LinOp<kStateDim, kAlgDim> b = build_B();
  static const LinOp<kAlgDim, kStateDim> c = build_C();

  const auto derivative = [&](const Mat3& h, const AlgVec& eta, const Covariance<kStateDim>& sigma, double ts,
                              int stage) {
    const IekfGain k = gain(sigma, c, noise);
    const IekfTangent tangent = iekf_rhs(h, eta, ts, y.stage(stage), model, k);
    const StateOp a = build_A(eta, model.df(ts, eta));
    return Derivative{tangent.h_dot, tangent.eta_dot, riccati_rhs(sigma, a, b, c, noise)};
  };

  const double t = state.t;
  const double half = 0.5 * dt;
  const Mat3& h0 = state.h.matrix();

  const Derivative d1 = derivative(h0, state.eta, state.sigma, t, 0);
  const Derivative d2 = derivative(h0 + half * d1.h, state.eta + half * d1.eta, state.sigma + half * d1.sigma,
                                   t + half, 1);
  const Derivative d3 = derivative(h0 + half * d2.h, state.eta + half * d2.eta, state.sigma + half * d2.sigma,
                                   t + half, 2);
  const Derivative d4 =
      derivative(h0 + dt * d3.h, state.eta + dt * d3.eta, state.sigma + dt * d3.sigma, t + dt, 3);

  const double w = dt / 6.0;
  IekfState next;
  next.eta = state.eta + w * (d1.eta + 2.0 * d2.eta + 2.0 * d3.eta + d4.eta);
  if (!next.eta.allFinite()) {
    throw DivergenceError("iekf_step: velocity estimate became non-finite");
  }
  const Mat3 h_next = h0 + w * (d1.h + 2.0 * d2.h + 2.0 * d3.h + d4.h);
  if (!h_next.allFinite()) {
    throw DivergenceError("iekf_step: orientation estimate became non-finite");
  }
  next.h = renormalize(h_next);

  const Covariance<kStateDim> sigma_next =
      state.sigma + w * (d1.sigma + 2.0 * d2.sigma + 2.0 * d3.sigma + d4.sigma);
  next.asymmetry_warnings = state.asymmetry_warnings + (asymmetry(sigma_next) > kAsymmetryWarnTol ? 1 : 0);
  next.sigma = symmetrize(sigma_next);
  check_psd(next.sigma, "iekf_step");
  next.t = t + dt;
  return next;
}

}  // namespace lie_iekf
