#pragma once

#include <Eigen/Dense>

#include "lie_iekf/so3.hpp"

namespace lie_iekf {

// Linear operators are dense matrices in the fixed orthonormal basis
// (e1, e2, e3) of each algebra slot. The compile-time shape names the domain
// (columns) and codomain (rows).
template <int Rows, int Cols>
using LinOp = Eigen::Matrix<double, Rows, Cols>;

template <int N>
using Vec = Eigen::Matrix<double, N, 1>;

// g^2 is ordered (group-error slot, velocity slot).
inline constexpr int kAlgDim = 3;
inline constexpr int kStateDim = 2 * kAlgDim;

using StateOp = LinOp<kStateDim, kStateDim>;
using StateVec = Vec<kStateDim>;

/// Linearized error dynamics on g^2:
///   A (alpha, beta) = (-ad_eta(alpha) + beta, df * beta)
/// where ad_eta is the cross product by eta in vee coordinates.
StateOp build_A(const AlgVec& eta, const Mat3& df);

/// Noise injection into the velocity slot: B beta = (0, beta).
LinOp<kStateDim, kAlgDim> build_B();

/// Output map reading the group-error slot: C (alpha, beta) = alpha.
LinOp<kAlgDim, kStateDim> build_C();

/// Adjoint with respect to the basis inner product (the transpose).
template <typename Derived>
auto adjoint(const Eigen::MatrixBase<Derived>& op) {
  return op.transpose().eval();
}

/// Action of X (x) Y on Z in T (x) V, with Z read as a map T -> V:
/// returns Y o Z o X*. Shapes: X: T -> U, Y: V -> W, Z: T -> V.
/// Throws lie_iekf::Error on incompatible shapes.
Eigen::MatrixXd tensor_apply(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                             const Eigen::MatrixXd& z);

/// The operator x |-> <a, x> b identified with the tensor a (x) b.
Eigen::MatrixXd rank_one(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace lie_iekf
