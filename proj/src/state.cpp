#include "polsim/state.hpp"

namespace polsim {

const char* to_string(SolverMode mode) {
  return mode == SolverMode::advection ? "advection" : "full";
}

SolverState::SolverState(Axis x, Axis z, SolverMode m)
    : mode(m), E(x, z), psi_e(x, z), psi_q(x, z), E_tilde(x, z) {}

bool SolverState::consistent() const {
  return E.same_geometry(psi_e) && E.same_geometry(psi_q) && E.same_geometry(E_tilde) &&
         E.size() == E.nx() * E.nz();
}

}  // namespace polsim
