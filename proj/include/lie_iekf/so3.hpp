#pragma once

#include <Eigen/Dense>

namespace lie_iekf {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// so(3) element in vee coordinates. The standard dot product on R^3 is the
/// inner product used for every adjoint, gain and covariance.
using AlgVec = Eigen::Vector3d;

inline constexpr double kOrthonormalityTol = 1e-9;
inline constexpr double kSkewTol = 1e-12;
inline constexpr double kExpTaylorThreshold = 1e-8;

/// Rotation matrix. Instances obtained through the public factories are
/// guaranteed orthonormal with det +1 within kOrthonormalityTol.
class Rot3 {
 public:
  Rot3() : m_(Mat3::Identity()) {}

  static Rot3 identity() { return Rot3(); }

  /// Throws lie_iekf::Error if `m` is not a rotation within tolerance.
  static Rot3 from_matrix(const Mat3& m);

  const Mat3& matrix() const { return m_; }

  Rot3 inverse() const { return Rot3(m_.transpose(), Unchecked{}); }
  Rot3 operator*(const Rot3& other) const { return Rot3(m_ * other.m_, Unchecked{}); }

  /// ||M^T M - I||_F
  double orthonormality_error() const;

 private:
  struct Unchecked {};
  Rot3(const Mat3& m, Unchecked) : m_(m) {}

  friend Rot3 exp_so3(const AlgVec& x);
  friend Rot3 renormalize(const Mat3& m);

  Mat3 m_;
};

/// hat(x) * y == x.cross(y)
Mat3 hat(const Vec3& x);

/// Inverse of hat. Throws lie_iekf::Error if `m` is not skew within kSkewTol.
AlgVec vee(const Mat3& m);

/// Rodrigues formula, with a second-order Taylor fallback below
/// kExpTaylorThreshold.
Rot3 exp_so3(const AlgVec& x);

/// Orthogonal (Frobenius) projection onto so(3): vee((M - M^T) / 2).
AlgVec project_skew(const Mat3& m);

/// Matrix commutator of hat(x) and hat(y), in vee coordinates.
AlgVec bracket(const AlgVec& x, const AlgVec& y);

/// Orthogonal polar factor of `m`, i.e. the nearest rotation in Frobenius
/// norm. Throws lie_iekf::Error for singular or reflective input.
Rot3 renormalize(const Mat3& m);

}  // namespace lie_iekf
