#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "polsim/medium.hpp"
#include "polsim/probe.hpp"
#include "polsim/state.hpp"

namespace polsim {

// How the uniform drift v0 along x is discretized.
//  lattice: first-order upwind at unit Courant number, i.e. an exact one-cell
//           translation applied whenever round(v0 t / dx) advances.
//  upwind:  first-order upwind every step at Courant number v0 dt / dx.
enum class XTransport { lattice, upwind };

struct SolverConfig {
  SolverMode mode = SolverMode::advection;
  double dt = 0.0;          // 0 selects cfl_safety * (stability bound)
  double cfl_safety = 0.9;  // in (0, 1)
  double t_end = 50.0;
  double snapshot_every = 5.0;
  bool v_r_enabled = false;
  XTransport x_transport = XTransport::lattice;
  int threads = 1;
};

// Largest step allowed by the explicit stability bounds (before safety).
double stability_bound(SolverMode mode, const MediumSpec& spec, const Axis& x, const Axis& z,
                       bool v_r_enabled);

// Throws Error(cfl) naming the violated bound.
void check_cfl(double dt, double safety, SolverMode mode, const MediumSpec& spec,
               const Axis& x, const Axis& z, bool v_r_enabled);

// Owns the coefficient tables of one (medium, probe, lattice) combination
// and advances SolverState in place.
class Stepper {
 public:
  Stepper(const MediumSpec& spec, const ProbeSpec& probe, const Axis& x, const Axis& z,
          const SolverConfig& config);
  ~Stepper();
  Stepper(Stepper&&) noexcept;
  Stepper& operator=(Stepper&&) noexcept;

  // Zero fields at t = 0 (derived grids included).
  SolverState initial_state() const;

  void step(SolverState& state, double dt);

  // Recomputes the slaved grids (E, psi_q in advection mode; E_tilde in
  // full mode) from the evolved ones.
  void refresh_derived(SolverState& state) const;

  double nominal_dt() const { return nominal_dt_; }
  std::uint64_t steps_taken() const { return steps_; }

 private:
  struct Tables;
  void step_advection(SolverState& state, double dt);
  void step_full(SolverState& state, double dt);
  void transport_x(FieldGrid& grid, double t_old, double t_new, double dt);

  MediumSpec spec_;
  ProbeSpec probe_;
  SolverConfig config_;
  double nominal_dt_ = 0.0;
  std::uint64_t steps_ = 0;
  std::unique_ptr<Tables> tables_;
};

// Single-step conveniences; they rebuild the coefficient tables per call.
SolverState step_advection(const SolverState& state, const MediumSpec& spec,
                           const ProbeSpec& probe, double dt);
SolverState step_full(const SolverState& state, const MediumSpec& spec, const ProbeSpec& probe,
                      double dt);

using SnapshotSink = std::function<void(const SolverState&)>;
using ProgressSink = std::function<void(double t, std::uint64_t steps)>;

// Snapshot times: 0, every, 2*every, ... up to t_end (t_end itself is always
// included).
std::vector<double> snapshot_times(double t_end, double every);

// Integrates from `initial` (or zero fields at t = 0) to t_end and hands
// each snapshot to `sink` in time order.
void run(const SolverConfig& config, const MediumSpec& spec, const ProbeSpec& probe,
         const Axis& x, const Axis& z, const SnapshotSink& sink,
         const ProgressSink& progress = {}, const SolverState* initial = nullptr);

std::vector<SolverState> run(const SolverConfig& config, const MediumSpec& spec,
                             const ProbeSpec& probe, const Axis& x, const Axis& z);

struct AdiabaticResidual {
  double r_q = 0.0;
  double r_e = 0.0;
};

// Distance of a full-mode state from the adiabatic relations
//   psi_q = -g sqrt(n) E~,   psi_e = i (g sqrt(n) / Omega)(v0 d/dx + d/dt) E~
// restricted to nodes inside the beams carrying >= 1% of the peak
// excitation density. d/dt E~ is closed with the adiabatic propagation law.
AdiabaticResidual adiabatic_residual(const SolverState& state, const MediumSpec& spec);

}  // namespace polsim
