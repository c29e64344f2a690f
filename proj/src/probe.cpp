#include "polsim/probe.hpp"

#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "polsim/error.hpp"
#include "polsim/medium.hpp"

namespace polsim {

double ProbeSpec::envelope(double x, double t) const {
  const double sx = (x - x_center) / x_hwhm;
  const double st = (t - t_center) / t_hwhm;
  return amplitude * std::exp(-0.5 * std::numbers::ln2 * (sx * sx + st * st));
}

std::vector<std::string> ProbeSpec::validate(const MediumSpec& spec) const {
  if (!(x_hwhm > 0.0)) throw Error(ErrorCode::config, "probe.x_hwhm: must be > 0");
  if (!(t_hwhm > 0.0)) throw Error(ErrorCode::config, "probe.t_hwhm: must be > 0");
  if (!std::isfinite(amplitude)) throw Error(ErrorCode::config, "probe.amplitude: not finite");
  std::vector<std::string> warnings;
  const double ratio = spec.control1.width / x_hwhm;
  if (ratio < 3.0) {
    warnings.push_back(fmt::format(
        "probe is not much narrower than control beam 1 (width ratio {:.3g} < 3)", ratio));
  }
  if (std::abs(x_center - spec.control1.center) > 0.1 * spec.control1.width) {
    warnings.push_back("probe does not enter at the center of control beam 1");
  }
  return warnings;
}

}  // namespace polsim
