#pragma once

#include <optional>
#include <string>
#include <vector>

namespace polsim {

enum class Direction { plus_z, minus_z };

// Stationary Gaussian control beam. Amplitude profile
//   Omega(x) = amplitude * exp(-((x - center) / width)^2)
// so a width-1 beam has intensity shape exp(-2 (x - center)^2).
struct ControlLaser {
  double center = 0.0;
  double width = 1.0;
  double amplitude = 1.0;
  Direction direction = Direction::plus_z;

  double rabi(double x) const;
};

struct PhysicsConstants {
  double g = 1.0;       // radiation-matter coupling
  double c = 100.0;     // probe speed in vacuum
  double v0 = 0.1;      // atomic flow speed along +x
  double v_r = 0.0;     // recoil drift of psi_e along z
  double delta = 0.0;   // two-photon detuning
  double Delta = 0.0;   // one-photon detuning
  double gamma = 0.0;   // excited-state decay
};

// Reference group velocity along the axis of beam 1:
//   v(z) = base - dip_depth * exp(-((z - dip_center) / dip_width)^2)
// or, when `samples_z` is non-empty, piecewise-linear through the samples
// (held constant beyond the ends).
struct VgProfile {
  double base = 1.0;
  double dip_depth = 0.0;
  double dip_center = 0.0;
  double dip_width = 1.0;
  std::vector<double> samples_z;
  std::vector<double> samples_v;

  double operator()(double z) const;
  bool tabulated() const { return !samples_z.empty(); }
};

struct MediumSpec {
  ControlLaser control1;
  std::optional<ControlLaser> control2;
  VgProfile vg;
  PhysicsConstants constants;
  double z1 = 0.0;  // probe entry plane

  // Checks hard invariants over [z_lo, z_hi] (throws Error::config) and
  // returns soft warnings such as overlapping control beams.
  std::vector<std::string> validate(double z_lo, double z_hi) const;
};

// [Omega1(x) / Omega1(x1)]^2
double shape_a1(double x, const MediumSpec& spec);

// [Omega2(x) / Omega1(x1)]^2, zero without a second beam.
double shape_a2(double x, const MediumSpec& spec);

// a1(x) +- a2(x); minus when the second beam counter-propagates.
double shape_combined(double x, const MediumSpec& spec);

// Closed form of the integral of shape_combined from x1 to x (erf based).
// The characteristics engine tabulates the same integral by quadrature.
double shape_integral(double x, const MediumSpec& spec);

// Closed form of the integral of a1 alone from x1 to +infinity.
double shape_a1_total(const MediumSpec& spec);

double vg_tilde(double z, const MediumSpec& spec);

// v_g(x, z) = vg_tilde(z) * a(x); the sign gives the propagation direction.
double group_velocity(double x, double z, const MediumSpec& spec);

// n_g = g^2 n(z) / Omega^2(x), with Omega^2 the summed control intensity.
// Throws outside the control beams.
double group_index(double x, double z, const MediumSpec& spec);

// Ground-state density implied by vg_tilde: n = c Omega1(x1)^2 / (g^2 vg).
double density(double z, const MediumSpec& spec);

// Collective coupling g sqrt(n(z)) = Omega1(x1) sqrt(c / vg_tilde(z)).
double collective_coupling(double z, const MediumSpec& spec);

// Total control envelope Omega(x) seen by the excited state. Only defined
// for co-propagating beams (the sum of the two amplitude profiles).
double total_rabi(double x, const MediumSpec& spec);

// Relative threshold below which |a| counts as "outside the control beams".
inline constexpr double kBeamEdge = 1e-12;

}  // namespace polsim
