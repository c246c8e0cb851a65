#pragma once

#include <string>
#include <vector>

namespace lie_iekf {

struct SelfCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick property sweeps over the library (operator identities, Riccati
/// closed form, left invariance, zero-noise tracking). Deterministic.
std::vector<SelfCheck> run_selftest();

}  // namespace lie_iekf
