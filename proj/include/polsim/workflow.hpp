#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "polsim/config.hpp"
#include "polsim/diagnostics.hpp"
#include "polsim/state.hpp"

namespace polsim {

const char* library_version();

// Closed-form polariton sampled on the configured lattice at time t:
// E and psi_q from field_at, E_tilde = F / Omega1(x1), psi_e = 0.
SolverState characteristic_state(const RunConfig& config, const CharacteristicMap& map,
                                 double t);

// Starting state selected by config.initial.
SolverState initial_state(const RunConfig& config);

struct RunSummary {
  std::size_t snapshots = 0;
  std::uint64_t steps = 0;
  double dt = 0.0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
};

using RunProgress = std::function<void(double t, std::uint64_t steps)>;

// Run directory layout:
//   manifest.txt      key=value: kind, versions, lattice, step count, timing
//   config.cfg        canonical echo of the configuration
//   snapshots/        format-v1 files, one per field and snapshot time
// Everything below snapshots/ depends only on the configuration.
RunSummary run_to_directory(const RunConfig& config, const std::string& out_dir,
                            const RunProgress& progress = {});

// Characteristic evaluation at the run's snapshot times into the same
// layout, plus characteristics.txt (storage plane, extent, feasibility) and
// trajectories.txt (level sets xi = xi0 as "x z" polylines).
RunSummary characteristics_to_directory(const RunConfig& config, const std::string& out_dir,
                                        const std::vector<double>& xi0_levels,
                                        double trajectory_dx);

struct FieldDifference {
  std::size_t index = 0;
  double t = 0.0;
  std::string field;
  double l2 = 0.0;       // ||A - B||
  double linf = 0.0;     // max |A - B|
  double ref_l2 = 0.0;   // ||B||
  double rel_l2 = 0.0;   // l2 / ref_l2 (0 when both vanish)
};

struct CompareReport {
  std::vector<FieldDifference> rows;
  // Per field: sqrt(sum_t ||A - B||^2 / sum_t ||B||^2) and max_t linf.
  std::vector<std::pair<std::string, double>> rel_l2_all;
  std::vector<std::pair<std::string, double>> linf_all;

  double rel_l2(const std::string& field) const;
  std::string text() const;
  std::string key_values() const;
};

// B is the reference. Snapshot sets must match in index, time and lattice.
CompareReport compare_directories(const std::string& dir_a, const std::string& dir_b);

// verify_geometry on a run directory. dz_atom (half width of the atomic
// beam) defaults to the medium depth z_max - z1.
GeometryReport widths_from_directory(const std::string& dir,
                                     std::optional<double> dz_atom = std::nullopt);

// Snapshot subdirectory of a run directory.
std::string snapshot_dir(const std::string& run_dir);

}  // namespace polsim
