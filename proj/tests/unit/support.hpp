#pragma once

#include <string>

#include "polsim/config.hpp"
#include "polsim/medium.hpp"

namespace polsim::test {

inline std::string preset(const std::string& name) {
  return std::string(POLSIM_PRESET_DIR) + "/" + name;
}

inline RunConfig fig2() { return load_config(preset("fig2.cfg")); }

// Beam 1 at the origin, so wide that a(x) = 1 to rounding on [-10, 10].
inline MediumSpec flat_medium(double vg, double v0) {
  MediumSpec m;
  m.control1.center = 0.0;
  m.control1.width = 1e9;
  m.vg.base = vg;
  m.vg.dip_depth = 0.0;
  m.constants.v0 = v0;
  return m;
}

}  // namespace polsim::test
