#pragma once

#include <string>
#include <utility>
#include <vector>

#include "polsim/grid.hpp"
#include "polsim/medium.hpp"
#include "polsim/probe.hpp"
#include "polsim/quadrature.hpp"

namespace polsim {

struct Window {
  double x_lo = -3.0;
  double x_hi = 9.0;
  double z_lo = 0.0;
  double z_hi = 4.0;
};

// Quadrature tables behind the characteristic coordinates
//   xi(x, z)     = x1 + int_{x1}^{x} a(x') dx' - v0 int_{z1}^{z} dz' / vg(z')
//   tau(t, x, z) = t + (xi(x, z) - x) / v0
// With x1 = 0 this is exactly the familiar form; the x1 offset keeps
// xi(x, z1) ~ x near the entry point for any beam-1 position.
class CharacteristicMap {
 public:
  struct Options {
    double tolerance = 1e-8;  // absolute quadrature tolerance
    double x_step = 1e-2;     // base lattice spacing along x
    double z_step = 1e-2;     // base lattice spacing along z (refined in the dip)
  };

  CharacteristicMap(const MediumSpec& spec, const Window& window, Options options);
  CharacteristicMap(const MediumSpec& spec, const Window& window)
      : CharacteristicMap(spec, window, Options{}) {}

  double xi(double x, double z) const;
  double tau(double t, double x, double z) const;

  // Shape and travel-time integrals on their own.
  double shape_integral(double x) const { return shape_table_(x); }
  double travel_integral(double z) const { return travel_table_(z); }

  // Integral of a1 from x1 out to where a1 drops below kBeamEdge.
  double a1_total() const { return a1_total_; }
  double x_infinity() const { return x_infinity_; }

  double v0() const { return v0_; }
  double x1() const { return x1_; }
  double z1() const { return z1_; }
  double tolerance() const { return options_.tolerance; }
  const Window& window() const { return window_; }
  const CumulativeTable& shape_table() const { return shape_table_; }
  const CumulativeTable& travel_table() const { return travel_table_; }

 private:
  Window window_;
  Options options_;
  double v0_;
  double x1_;
  double z1_;
  double a1_total_ = 0.0;
  double x_infinity_ = 0.0;
  CumulativeTable shape_table_;
  CumulativeTable travel_table_;
};

struct PolaritonSample {
  cplx E;
  cplx psi_q;
};

// Electric and spin components of the polariton at (t, x, z) in terms of
// the incoming probe envelope evaluated at (xi, tau).
PolaritonSample field_at(double t, double x, double z, const ProbeSpec& probe,
                         const CharacteristicMap& map, const MediumSpec& spec);

// Envelope value F(xi, tau); the auxiliary field is F / Omega1(x1).
double polariton_envelope(double t, double x, double z, const ProbeSpec& probe,
                          const CharacteristicMap& map);

struct Trajectory {
  double xi0 = 0.0;
  std::vector<std::pair<double, double>> points;  // (x, z), increasing x
  std::string notice;                             // set when the level set is empty
};

// Level set xi(x, z) = xi0 marched in x with step `dx`; each column is solved
// by bisection on the monotone z dependence.
Trajectory trace_trajectory(double xi0, const CharacteristicMap& map, double dx,
                            double tol = 1e-10);

// Storage plane: v0 * int_{z1}^{z_inf} dz / vg = a1_total. Throws
// Error(not_stored) when the medium is optically thin in z.
double find_z_infinity(const CharacteristicMap& map, double tol = 1e-10);

struct SpinWaveExtent {
  double dx_s = 0.0;
  double dz_s = 0.0;
  double z_infinity = 0.0;
  std::vector<std::string> warnings;
};

SpinWaveExtent spin_wave_extent(const ProbeSpec& probe, const CharacteristicMap& map,
                                const MediumSpec& spec);

enum class StorageClass { stored, marginal, escapes };

struct StorageFeasibility {
  double margin = 0.0;
  StorageClass verdict = StorageClass::escapes;
};

const char* to_string(StorageClass c);

// margin = [v0 / vg(z_inf)] / [x_hwhm / dz_atom]
StorageFeasibility storage_feasibility(const ProbeSpec& probe, double dz_atom,
                                       const CharacteristicMap& map, const MediumSpec& spec);

// Output width dx_p1 / |a2(x2)| of the probe released by the second beam.
double retrieved_width(double dx_p1, const MediumSpec& spec);

}  // namespace polsim
