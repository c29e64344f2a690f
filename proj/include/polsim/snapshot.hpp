#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "polsim/grid.hpp"
#include "polsim/state.hpp"

namespace polsim {

enum class FieldName { E, psi_e, psi_q, E_tilde };

const char* to_string(FieldName f);
FieldName field_from_string(std::string_view s);

inline constexpr FieldName kAllFields[] = {FieldName::E, FieldName::psi_e, FieldName::psi_q,
                                           FieldName::E_tilde};

struct FieldSnapshot {
  double t = 0.0;
  FieldName field = FieldName::E;
  FieldGrid grid;
};

// Format v1:
//   # polsim-snapshot v1
//   # t=<decimal>
//   # field=E|psi_e|psi_q|E_tilde
//   # nx=<int> dx=<decimal> x0=<decimal>
//   # nz=<int> dz=<decimal> z0=<decimal>
//   nx*nz lines "re im", z-major
// Decimals are shortest round-trip, so text -> value -> text is the
// identity. Negative zero is written as 0.
std::string format_snapshot(const FieldGrid& grid, double t, FieldName field);
FieldSnapshot parse_snapshot(std::string_view text);

void write_field_snapshot(const std::string& path, const FieldGrid& grid, double t,
                          FieldName field);
FieldSnapshot read_field_snapshot(const std::string& path);

// One file per field: <dir>/snap_<index>_<field>.txt
std::string snapshot_path(const std::string& dir, std::size_t index, FieldName field);
void write_snapshot(const SolverState& state, const std::string& dir, std::size_t index);
SolverState read_snapshot(const std::string& dir, std::size_t index, SolverMode mode);

// Indices of complete snapshot sets (all four fields) in `dir`, ascending.
std::vector<std::size_t> list_snapshots(const std::string& dir);

}  // namespace polsim
