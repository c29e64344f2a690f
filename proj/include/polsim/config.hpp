#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "polsim/characteristics.hpp"
#include "polsim/medium.hpp"
#include "polsim/probe.hpp"
#include "polsim/solver.hpp"

namespace polsim {

struct GridConfig {
  double x_min = -3.0;
  double x_max = 9.0;
  double z_min = 0.0;
  double z_max = 4.0;
  std::size_t nx = 400;
  std::size_t nz = 400;

  Axis x_axis() const { return Axis::spanning(x_min, x_max, nx); }
  Axis z_axis() const { return Axis::spanning(z_min, z_max, nz); }
  Window window() const { return {x_min, x_max, z_min, z_max}; }
};

// zero: empty medium at t = 0, the probe enters through z1 only.
// characteristic: start from the closed-form polariton at t = 0, which
// also carries the part of the pulse that is already inside the medium.
enum class InitialState { zero, characteristic };

const char* to_string(InitialState s);

struct OutputConfig {
  std::string directory = "out";
  int format_version = 1;
};

struct RunConfig {
  GridConfig grid;
  MediumSpec medium;
  ProbeSpec probe;
  SolverConfig solver;
  InitialState initial = InitialState::zero;
  OutputConfig output;

  // Throws Error(config) naming section.key; returns soft warnings.
  std::vector<std::string> validate() const;
};

// INI text:
//   [grid]     x_min=-3 x_max=9 z_min=0 z_max=4 nx=400 nz=400
//   [medium]   vg_base=1 vg_dip_depth=0 vg_dip_center=0 vg_dip_width=1
//              vg_samples_z= vg_samples_v= (space separated; override the dip)
//              v0=0.1 g=1 c=100 z1=<z_min>
//   [control1] center=0 width=1 amplitude=1 direction=+z
//   [control2] optional, same keys
//   [probe]    x_center=0 x_hwhm=0.2 t_center=5 t_hwhm=1.5 amplitude=1
//   [physics]  delta=0 Delta=0 gamma=0 v_r=0 v_r_enabled=false
//   [solver]   mode=advection dt=0 (auto) cfl_safety=0.9 t_end=50
//              snapshot_every=5 x_transport=lattice initial=zero threads=1
//   [output]   directory=out format_version=1
// Every section except control2 must appear; keys inside a section fall
// back to the defaults above. '#' and ';' start comments.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Canonical text; parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& config);

}  // namespace polsim
