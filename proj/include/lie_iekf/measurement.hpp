#pragma once

#include <array>

#include "lie_iekf/so3.hpp"

namespace lie_iekf {

/// The group measurement seen by each of the four RK4 stages of a filter
/// step (stage times t, t + dt/2, t + dt/2, t + dt).
///
/// `hold` repeats one sample across the step. `at_stages` carries a distinct
/// value per stage; the Monte-Carlo harness uses it to integrate plant and
/// filter as one joint system, feeding the plant's stage iterates through the
/// measurement map.
class StageMeasurements {
 public:
  static StageMeasurements hold(const Rot3& y) {
    StageMeasurements out;
    out.y_.fill(y.matrix());
    return out;
  }

  static StageMeasurements at_stages(const std::array<Mat3, 4>& y) {
    StageMeasurements out;
    out.y_ = y;
    return out;
  }

  const Mat3& stage(int i) const { return y_[static_cast<std::size_t>(i)]; }

 private:
  std::array<Mat3, 4> y_;
};

}  // namespace lie_iekf
