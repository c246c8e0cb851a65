#pragma once

#include <cstddef>

#include "lie_iekf/dynamics.hpp"
#include "lie_iekf/measurement.hpp"
#include "lie_iekf/operators.hpp"
#include "lie_iekf/riccati.hpp"
#include "lie_iekf/so3.hpp"

namespace lie_iekf {

using IekfNoise = NoiseModel<kAlgDim, kAlgDim>;
using IekfGain = LinOp<kStateDim, kAlgDim>;

struct IekfState {
  Rot3 h;
  AlgVec eta = AlgVec::Zero();
  Covariance<kStateDim> sigma = Covariance<kStateDim>::Identity();
  double t = 0.0;
  // Steps whose pre-symmetrization asymmetry exceeded kAsymmetryWarnTol.
  std::size_t asymmetry_warnings = 0;
};

/// pi_g(y^-1 h - I) = project_skew(y^T h - I). Vanishes whenever y^T h is
/// symmetric, which includes rotations by exactly pi.
AlgVec innovation(const Mat3& y, const Mat3& h);

struct IekfTangent {
  Mat3 h_dot;
  AlgVec eta_dot;
};

/// Filter vector field for a given gain K = (K_G; K_g):
///   h_dot   = h hat(eta - K_G r)
///   eta_dot = f(t, eta) - K_g r,      r = innovation(y, h)
IekfTangent iekf_rhs(const Mat3& h, const AlgVec& eta, double t, const Mat3& y, const DynamicsModel& model,
                     const IekfGain& k);

/// One RK4 step of the coupled (h, eta, Sigma) system. The gain and A(t) are
/// rebuilt from each stage's Sigma and eta. h is renormalized and Sigma
/// symmetrized afterwards. Throws DivergenceError on loss of PSD.
IekfState iekf_step(const IekfState& state, const StageMeasurements& y, const DynamicsModel& model,
                    const IekfNoise& noise, double dt);

inline IekfState iekf_step(const IekfState& state, const Rot3& y, const DynamicsModel& model,
                           const IekfNoise& noise, double dt) {
  return iekf_step(state, StageMeasurements::hold(y), model, noise, dt);
}

}  // namespace lie_iekf
