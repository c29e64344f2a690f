#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polsim/characteristics.hpp"
#include "polsim/grid.hpp"
#include "polsim/medium.hpp"
#include "polsim/probe.hpp"
#include "polsim/state.hpp"

namespace polsim {

enum class AxisSelect { x, z };

struct CentroidWidth {
  double centroid = 0.0;
  double hwhm = 0.0;
};

// Moments of |value|^2 along one axis with the other integrated out. The
// half width is read off the marginal by linear interpolation. Throws on an
// all-zero grid.
CentroidWidth centroid_and_width(const FieldGrid& grid, AxisSelect axis);

// Same measurement on a sampled nonnegative profile over `axis`.
CentroidWidth profile_centroid_and_width(std::span<const double> profile, const Axis& axis);

struct ExcitationNumbers {
  double N_E = 0.0;
  double N_e = 0.0;
  double N_q = 0.0;
  double total() const { return N_E + N_e + N_q; }
};

ExcitationNumbers excitation_numbers(const SolverState& state);

// max |(|E|^2 / |psi_q|^2) / (v_g / c) - 1| over nodes inside the control
// beams carrying at least 1% of the peak excitation density.
double polariton_ratio_check(const SolverState& state, const MediumSpec& spec);

struct GeometryEntry {
  std::string key;
  double measured = 0.0;
  double predicted = 0.0;
  double deviation = 0.0;  // |measured - predicted| / |predicted|
  bool applicable = true;
  std::string note;
};

struct GeometryReport {
  StorageFeasibility feasibility;
  std::vector<double> stored_times;
  std::vector<GeometryEntry> entries;

  const GeometryEntry* find(const std::string& key) const;
  std::string text() const;
  std::string key_values() const;
};

// Compares a finished run against the characteristic predictions: stored
// spin-wave extent, storage plane, drift speed and, with a second beam,
// the retrieved width. Snapshots must be in time order and carry E, psi_q
// and E_tilde (psi_e is not used).
GeometryReport verify_geometry(std::span<const SolverState> snapshots, const ProbeSpec& probe,
                               const CharacteristicMap& map, const MediumSpec& spec,
                               double dz_atom);

}  // namespace polsim
