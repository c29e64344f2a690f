#pragma once

#include <string>
#include <vector>

namespace polsim {

struct MediumSpec;

// Incoming probe at the entry plane. Widths are half widths at half maximum
// of the intensity |E|^2, in x and in time:
//   |E_in(x, t)|^2 = amplitude^2 * 2^-[((x - x_center)/x_hwhm)^2 + ((t - t_center)/t_hwhm)^2]
struct ProbeSpec {
  double x_center = 0.0;
  double x_hwhm = 0.2;
  double t_center = 5.0;
  double t_hwhm = 1.5;
  double amplitude = 1.0;

  double envelope(double x, double t) const;

  // Throws Error::config on bad widths; warns when the probe is not much
  // narrower than control beam 1 or does not enter at its center.
  std::vector<std::string> validate(const MediumSpec& spec) const;
};

}  // namespace polsim
