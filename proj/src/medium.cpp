#include "polsim/medium.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "polsim/error.hpp"

namespace polsim {

namespace {

const double kSqrtPiOver8 = std::sqrt(std::numbers::pi / 8.0);

double intensity_ratio(const ControlLaser& beam, const MediumSpec& spec) {
  const double r = beam.amplitude / spec.control1.amplitude;
  return r * r;
}

// Integral of exp(-2 ((s - c) / w)^2) ds from lo to hi.
double gaussian_sq_integral(double lo, double hi, double c, double w) {
  const double k = std::numbers::sqrt2 / w;
  return w * kSqrtPiOver8 * (std::erf(k * (hi - c)) - std::erf(k * (lo - c)));
}

double sign_of(const ControlLaser& beam) {
  return beam.direction == Direction::plus_z ? 1.0 : -1.0;
}

}  // namespace

double ControlLaser::rabi(double x) const {
  const double s = (x - center) / width;
  return amplitude * std::exp(-s * s);
}

double VgProfile::operator()(double z) const {
  if (!tabulated()) {
    const double s = (z - dip_center) / dip_width;
    return base - dip_depth * std::exp(-s * s);
  }
  if (z <= samples_z.front()) return samples_v.front();
  if (z >= samples_z.back()) return samples_v.back();
  const auto it = std::upper_bound(samples_z.begin(), samples_z.end(), z);
  const auto k = static_cast<std::size_t>(it - samples_z.begin());
  const double f = (z - samples_z[k - 1]) / (samples_z[k] - samples_z[k - 1]);
  return (1.0 - f) * samples_v[k - 1] + f * samples_v[k];
}

std::vector<std::string> MediumSpec::validate(double z_lo, double z_hi) const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw Error(ErrorCode::config, fmt::format("{}: {}", key, why));
  };
  if (!(control1.width > 0.0)) fail("control1.width", "must be > 0");
  if (!(control1.amplitude > 0.0)) fail("control1.amplitude", "must be > 0");
  if (control1.direction != Direction::plus_z) fail("control1.direction", "must be +z");
  if (control2) {
    if (!(control2->width > 0.0)) fail("control2.width", "must be > 0");
    if (!(control2->amplitude >= 0.0)) fail("control2.amplitude", "must be >= 0");
  }
  if (!(constants.c > 0.0)) fail("medium.c", "must be > 0");
  if (!(constants.v0 >= 0.0)) fail("medium.v0", "must be >= 0");
  if (!(constants.gamma >= 0.0)) fail("physics.gamma", "must be >= 0");
  if (!(constants.g > 0.0)) fail("medium.g", "must be > 0");
  if (vg.tabulated()) {
    if (vg.samples_z.size() != vg.samples_v.size() || vg.samples_z.size() < 2) {
      fail("medium.vg_samples", "need at least two (z, v) pairs");
    }
    for (std::size_t k = 1; k < vg.samples_z.size(); ++k) {
      if (!(vg.samples_z[k] > vg.samples_z[k - 1])) {
        fail("medium.vg_samples", "z values must increase strictly");
      }
    }
  } else if (!(vg.dip_width > 0.0)) {
    fail("medium.vg_dip_width", "must be > 0");
  }

  // Positivity over the window; the dip minimum is checked explicitly.
  constexpr int kProbe = 4000;
  double vmin = vg(z_lo);
  for (int k = 0; k <= kProbe; ++k) {
    vmin = std::min(vmin, vg(z_lo + (z_hi - z_lo) * k / kProbe));
  }
  if (!vg.tabulated() && vg.dip_center >= z_lo && vg.dip_center <= z_hi) {
    vmin = std::min(vmin, vg(vg.dip_center));
  }
  for (double zs : vg.samples_z) {
    if (zs >= z_lo && zs <= z_hi) vmin = std::min(vmin, vg(zs));
  }
  if (!(vmin > 0.0)) {
    fail("medium.vg", fmt::format("group velocity profile must stay > 0 on [{}, {}] (min {})",
                                  z_lo, z_hi, vmin));
  }

  std::vector<std::string> warnings;
  if (control2) {
    const double gap = std::abs(control2->center - control1.center);
    const double need = 3.0 * (control1.width + control2->width);
    if (gap < need) {
      warnings.push_back(fmt::format(
          "control beams overlap: separation {} < 3 x (sum of widths) = {}", gap, need));
    }
  }
  return warnings;
}

double shape_a1(double x, const MediumSpec& spec) {
  const double s = (x - spec.control1.center) / spec.control1.width;
  return std::exp(-2.0 * s * s);
}

double shape_a2(double x, const MediumSpec& spec) {
  if (!spec.control2) return 0.0;
  const ControlLaser& b = *spec.control2;
  const double s = (x - b.center) / b.width;
  return intensity_ratio(b, spec) * std::exp(-2.0 * s * s);
}

double shape_combined(double x, const MediumSpec& spec) {
  double a = shape_a1(x, spec);
  if (spec.control2) a += sign_of(*spec.control2) * shape_a2(x, spec);
  return a;
}

double shape_integral(double x, const MediumSpec& spec) {
  const double x1 = spec.control1.center;
  double total = gaussian_sq_integral(x1, x, spec.control1.center, spec.control1.width);
  if (spec.control2) {
    const ControlLaser& b = *spec.control2;
    total += sign_of(b) * intensity_ratio(b, spec) *
             gaussian_sq_integral(x1, x, b.center, b.width);
  }
  return total;
}

double shape_a1_total(const MediumSpec& spec) {
  return spec.control1.width * kSqrtPiOver8;
}

double vg_tilde(double z, const MediumSpec& spec) { return spec.vg(z); }

double group_velocity(double x, double z, const MediumSpec& spec) {
  return vg_tilde(z, spec) * shape_combined(x, spec);
}

double group_index(double x, double z, const MediumSpec& spec) {
  double intensity = shape_a1(x, spec) + shape_a2(x, spec);
  if (!(intensity > kBeamEdge)) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("group index undefined outside control beams (x={})", x));
  }
  const double omega1 = spec.control1.amplitude;
  const double g = spec.constants.g;
  return g * g * density(z, spec) / (omega1 * omega1 * intensity);
}

double density(double z, const MediumSpec& spec) {
  const double omega1 = spec.control1.amplitude;
  const double g = spec.constants.g;
  return spec.constants.c * omega1 * omega1 / (g * g * vg_tilde(z, spec));
}

double collective_coupling(double z, const MediumSpec& spec) {
  return spec.control1.amplitude * std::sqrt(spec.constants.c / vg_tilde(z, spec));
}

double total_rabi(double x, const MediumSpec& spec) {
  double omega = spec.control1.rabi(x);
  if (spec.control2) {
    if (spec.control2->direction != Direction::plus_z) {
      throw Error(ErrorCode::unsupported,
                  "total Rabi envelope needs co-propagating control beams");
    }
    omega += spec.control2->rabi(x);
  }
  return omega;
}

}  // namespace polsim
