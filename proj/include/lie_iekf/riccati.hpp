#pragma once

// Differential Riccati equation on operator spaces and the associated
// Kalman gain. Everything here is templated on the state, noise and output
// dimensions so the same code drives the 6-dim invariant filter and the
// 12-dim embedded EKF.

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <functional>
#include <string>

#include "lie_iekf/error.hpp"
#include "lie_iekf/operators.hpp"

namespace lie_iekf {

template <int N>
using Covariance = LinOp<N, N>;

inline constexpr double kPsdDivergenceTol = 1e-6;
inline constexpr double kCovarianceTol = 1e-9;
inline constexpr double kAsymmetryWarnTol = 1e-9;

template <int N>
double asymmetry(const LinOp<N, N>& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

template <int N>
LinOp<N, N> symmetrize(const LinOp<N, N>& m) {
  return 0.5 * (m + m.transpose());
}

template <int N>
double min_eigenvalue(const LinOp<N, N>& m) {
  const Eigen::SelfAdjointEigenSolver<LinOp<N, N>> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Symmetric within kCovarianceTol and PSD within -kCovarianceTol.
template <int N>
bool is_covariance(const LinOp<N, N>& m) {
  return m.allFinite() && asymmetry(m) <= kCovarianceTol && min_eigenvalue(m) >= -kCovarianceTol;
}

/// Throws DivergenceError when `m` is non-finite or its smallest eigenvalue
/// is below -kPsdDivergenceTol. No clamping is applied.
template <int N>
void check_psd(const LinOp<N, N>& m, const char* who) {
  if (!m.allFinite()) {
    throw DivergenceError(std::string(who) + ": covariance became non-finite");
  }
  const double lambda = min_eigenvalue(m);
  if (lambda < -kPsdDivergenceTol) {
    throw DivergenceError(std::string(who) + ": covariance lost positive semidefiniteness (min eigenvalue " +
                          std::to_string(lambda) + ")");
  }
}

/// Process noise Q acting on an M-dim noise input and measurement noise R on
/// a P-dim output. R^-1 is computed once at construction.
template <int M, int P>
class NoiseModel {
 public:
  NoiseModel(const LinOp<M, M>& q, const LinOp<P, P>& r) : q_(q), r_(r) {
    if (!q.allFinite() || asymmetry(q) > 1e-12 || min_eigenvalue(q) < -1e-12) {
      throw Error("NoiseModel: Q must be symmetric positive semidefinite");
    }
    if (!r.allFinite() || asymmetry(r) > 1e-12 || !(min_eigenvalue(r) > 1e-12)) {
      throw Error("NoiseModel: R must be symmetric positive definite");
    }
    r_inv_ = r.inverse();
  }

  static NoiseModel isotropic(double q, double r) {
    return NoiseModel(q * LinOp<M, M>::Identity(), r * LinOp<P, P>::Identity());
  }

  const LinOp<M, M>& Q() const { return q_; }
  const LinOp<P, P>& R() const { return r_; }
  const LinOp<P, P>& R_inverse() const { return r_inv_; }

 private:
  LinOp<M, M> q_;
  LinOp<P, P> r_;
  LinOp<P, P> r_inv_;
};

/// K = Sigma C* R^-1. Throws lie_iekf::Error if R is not positive definite.
template <int N, int P>
LinOp<N, P> gain(const LinOp<N, N>& sigma, const LinOp<P, N>& c, const LinOp<P, P>& r) {
  if (!r.allFinite() || !(min_eigenvalue(r) > 1e-12)) {
    throw Error("gain: R is singular or not positive definite");
  }
  const LinOp<P, P> r_inv = r.inverse();
  return sigma * c.transpose() * r_inv;
}

template <int N, int M, int P>
LinOp<N, P> gain(const LinOp<N, N>& sigma, const LinOp<P, N>& c, const NoiseModel<M, P>& noise) {
  return sigma * c.transpose() * noise.R_inverse();
}

/// A Sigma + Sigma A* + B Q B* - Sigma C* R^-1 C Sigma
template <int N, int M, int P>
LinOp<N, N> riccati_rhs(const LinOp<N, N>& sigma, const LinOp<N, N>& a, const LinOp<N, M>& b,
                        const LinOp<P, N>& c, const NoiseModel<M, P>& noise) {
  const LinOp<N, P> sc = sigma * c.transpose();
  const LinOp<N, N> as = a * sigma;
  return as + as.transpose() + b * noise.Q() * b.transpose() - sc * noise.R_inverse() * sc.transpose();
}

/// Covariance dynamics for an arbitrary gain K:
///   (A - K C) Sigma + Sigma (A - K C)* + B Q B* + K R K*
/// Coincides with riccati_rhs when K is the optimal gain.
template <int N, int M, int P>
LinOp<N, N> covariance_rhs(const LinOp<N, N>& sigma, const LinOp<N, N>& a, const LinOp<N, M>& b,
                           const LinOp<P, N>& c, const LinOp<N, P>& k, const NoiseModel<M, P>& noise) {
  const LinOp<N, N> closed = a - k * c;
  const LinOp<N, N> cs = closed * sigma;
  return cs + cs.transpose() + b * noise.Q() * b.transpose() + k * noise.R() * k.transpose();
}

/// Time-varying linear system driving a stand-alone Riccati propagation.
template <int N, int M, int P>
struct RiccatiContext {
  std::function<LinOp<N, N>(double)> a;
  LinOp<N, M> b;
  LinOp<P, N> c;
  NoiseModel<M, P> noise;
};

/// Result of one propagation step. `asymmetry` is measured before the
/// explicit symmetrization.
template <int N>
struct RiccatiStep {
  Covariance<N> sigma;
  double asymmetry = 0.0;
};

/// One classical RK4 step of the Riccati equation from t to t + dt, followed
/// by symmetrization and a divergence check.
template <int N, int M, int P>
RiccatiStep<N> step_riccati(const Covariance<N>& sigma, const RiccatiContext<N, M, P>& ctx, double t,
                            double dt) {
  if (!(dt > 0.0)) {
    throw Error("step_riccati: dt must be positive");
  }
  const auto rhs = [&](const Covariance<N>& s, double ts) {
    return riccati_rhs<N, M, P>(s, ctx.a(ts), ctx.b, ctx.c, ctx.noise);
  };
  const double half = 0.5 * dt;
  const Covariance<N> k1 = rhs(sigma, t);
  const Covariance<N> k2 = rhs(sigma + half * k1, t + half);
  const Covariance<N> k3 = rhs(sigma + half * k2, t + half);
  const Covariance<N> k4 = rhs(sigma + dt * k3, t + dt);
  const Covariance<N> next = sigma + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  RiccatiStep<N> out{symmetrize(next), asymmetry(next)};
  check_psd(out.sigma, "step_riccati");
  return out;
}

}  // namespace lie_iekf
