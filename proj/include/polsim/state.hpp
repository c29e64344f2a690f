#pragma once

#include "polsim/grid.hpp"

namespace polsim {

enum class SolverMode { advection, full };

const char* to_string(SolverMode mode);

// Field triple on a shared lattice. In advection mode E_tilde is the
// evolved quantity and E, psi_q are slaved to it (psi_e stays zero); in
// full mode E, psi_e, psi_q evolve and E_tilde = E / Omega(x) is derived.
struct SolverState {
  double t = 0.0;
  SolverMode mode = SolverMode::advection;
  FieldGrid E;
  FieldGrid psi_e;
  FieldGrid psi_q;
  FieldGrid E_tilde;

  SolverState() = default;
  SolverState(Axis x, Axis z, SolverMode mode);

  const Axis& x() const { return E.x(); }
  const Axis& z() const { return E.z(); }
  bool consistent() const;
};

}  // namespace polsim
