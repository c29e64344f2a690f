#include "polsim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "polsim/error.hpp"

namespace polsim {

Axis Axis::spanning(double lo, double hi, std::size_t count) {
  if (count < 2 || !(hi > lo)) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("axis needs hi > lo and at least 2 nodes (got [{}, {}], {})", lo,
                            hi, count));
  }
  return Axis{lo, (hi - lo) / static_cast<double>(count - 1), count};
}

FieldGrid::FieldGrid(Axis x, Axis z) : x_(x), z_(z) {
  if (!(x.step > 0.0) || !(z.step > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "grid spacing must be positive");
  }
  if (x.count < 2 || z.count < 2) {
    throw Error(ErrorCode::invalid_argument, "grid needs at least 2 nodes per axis");
  }
  values_.assign(x.count * z.count, cplx{});
}

void FieldGrid::fill(cplx v) { std::fill(values_.begin(), values_.end(), v); }

namespace {

// Cell index and fractional offset of `q` along `axis`. Queries within a
// rounding hair of the far edge are clamped onto the last cell.
bool locate(const Axis& axis, double q, std::size_t& cell, double& frac) {
  const double s = (q - axis.origin) / axis.step;
  const double n = static_cast<double>(axis.count - 1);
  constexpr double eps = 1e-9;
  if (!(s >= -eps && s <= n + eps)) return false;
  const double clamped = std::clamp(s, 0.0, n);
  auto c = static_cast<std::size_t>(std::floor(clamped));
  if (c >= axis.count - 1) c = axis.count - 2;
  cell = c;
  frac = clamped - static_cast<double>(c);
  return true;
}

}  // namespace

cplx FieldGrid::interpolate(double x, double z) const {
  std::size_t i = 0, j = 0;
  double fx = 0.0, fz = 0.0;
  if (!locate(x_, x, i, fx)) {
    throw Error(ErrorCode::out_of_bounds,
                fmt::format("interpolation x={} outside [{}, {}]", x, x_.origin, x_.last()));
  }
  if (!locate(z_, z, j, fz)) {
    throw Error(ErrorCode::out_of_bounds,
                fmt::format("interpolation z={} outside [{}, {}]", z, z_.origin, z_.last()));
  }
  // Exact at nodes: a zero weight never touches the neighbour.
  const cplx v00 = at(i, j);
  const cplx v10 = fx > 0.0 ? at(i + 1, j) : cplx{};
  const cplx v01 = fz > 0.0 ? at(i, j + 1) : cplx{};
  const cplx v11 = (fx > 0.0 && fz > 0.0) ? at(i + 1, j + 1) : cplx{};
  return (1.0 - fx) * ((1.0 - fz) * v00 + fz * v01) + fx * ((1.0 - fz) * v10 + fz * v11);
}

double l2_norm_squared(const FieldGrid& grid) {
  double sum = 0.0;
  for (const cplx& v : grid.values()) sum += std::norm(v);
  return sum * grid.x().step * grid.z().step;
}

double l2_norm(const FieldGrid& grid) { return std::sqrt(l2_norm_squared(grid)); }

}  // namespace polsim
