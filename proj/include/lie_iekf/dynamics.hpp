#pragma once

#include <functional>

#include "lie_iekf/so3.hpp"

namespace lie_iekf {

/// Velocity dynamics in the Lie algebra, eta_dot = f(t, eta), together with
/// its derivative in eta. Any known control input is folded into `f`.
struct DynamicsModel {
  std::function<AlgVec(double, const AlgVec&)> f;
  std::function<Mat3(double, const AlgVec&)> df;
};

}  // namespace lie_iekf
