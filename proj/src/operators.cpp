#include "lie_iekf/operators.hpp"

#include <string>

#include "lie_iekf/error.hpp"

namespace lie_iekf {

StateOp build_A(const AlgVec& eta, const Mat3& df) {
  StateOp a = StateOp::Zero();
  a.topLeftCorner<3, 3>() = -hat(eta);
  a.topRightCorner<3, 3>().setIdentity();
  a.bottomRightCorner<3, 3>() = df;
  return a;
}

LinOp<kStateDim, kAlgDim> build_B() {
  LinOp<kStateDim, kAlgDim> b = LinOp<kStateDim, kAlgDim>::Zero();
  b.bottomRows<3>().setIdentity();
  return b;
}

LinOp<kAlgDim, kStateDim> build_C() {
  LinOp<kAlgDim, kStateDim> c = LinOp<kAlgDim, kStateDim>::Zero();
  c.leftCols<3>().setIdentity();
  return c;
}

Eigen::MatrixXd tensor_apply(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                             const Eigen::MatrixXd& z) {
  if (z.cols() != x.cols() || z.rows() != y.cols()) {
    throw Error("tensor_apply: shape mismatch (X " + std::to_string(x.rows()) + "x" +
                std::to_string(x.cols()) + ", Y " + std::to_string(y.rows()) + "x" +
                std::to_string(y.cols()) + ", Z " + std::to_string(z.rows()) + "x" +
                std::to_string(z.cols()) + ")");
  }
  return y * z * x.transpose();
}

Eigen::MatrixXd rank_one(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return b * a.transpose();
}

}  // namespace lie_iekf
