#include "lie_iekf/so3.hpp"

#include <cmath>

#include "lie_iekf/error.hpp"

namespace lie_iekf {

Rot3 Rot3::from_matrix(const Mat3& m) {
  if (!m.allFinite()) {
    throw Error("Rot3: non-finite entries");
  }
  const double ortho = (m.transpose() * m - Mat3::Identity()).norm();
  const double det = m.determinant();
  if (ortho > kOrthonormalityTol || std::abs(det - 1.0) > kOrthonormalityTol) {
    throw Error("Rot3: matrix is not a rotation (orthonormality error " + std::to_string(ortho) +
                ", det " + std::to_string(det) + ")");
  }
  return Rot3(m, Unchecked{});
}

double Rot3::orthonormality_error() const {
  return (m_.transpose() * m_ - Mat3::Identity()).norm();
}

Mat3 hat(const Vec3& x) {
  Mat3 m;
  m << 0.0, -x.z(), x.y(),
       x.z(), 0.0, -x.x(),
       -x.y(), x.x(), 0.0;
  return m;
}

AlgVec vee(const Mat3& m) {
  const double asym = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= kSkewTol)) {
    throw Error("vee: matrix is not skew-symmetric (|M + M^T|_max = " + std::to_string(asym) + ")");
  }
  return AlgVec(m(2, 1), m(0, 2), m(1, 0));
}

Rot3 exp_so3(const AlgVec& x) {
  const double theta2 = x.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a;
  double b;
  if (theta < kExpTaylorThreshold) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Mat3 k = hat(x);
  return Rot3(Mat3::Identity() + a * k + b * (k * k), Rot3::Unchecked{});
}

AlgVec project_skew(const Mat3& m) {
  return AlgVec(0.5 * (m(2, 1) - m(1, 2)),
                0.5 * (m(0, 2) - m(2, 0)),
                0.5 * (m(1, 0) - m(0, 1)));
}

AlgVec bracket(const AlgVec& x, const AlgVec& y) { return x.cross(y); }

Rot3 renormalize(const Mat3& m) {
  if (!m.allFinite()) {
    throw Error("renormalize: non-finite input");
  }
  const Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3& s = svd.singularValues();
  if (!(s(2) > 1e-12 * s(0))) {
    throw Error("renormalize: singular input");
  }
  const Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() <= 0.0) {
    throw Error("renormalize: polar factor is a reflection");
  }
  return Rot3(r, Rot3::Unchecked{});
}

}  // namespace lie_iekf
