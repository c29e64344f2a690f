#include "polsim/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "polsim/error.hpp"

namespace polsim {

namespace {

std::vector<double> uniform_nodes(double lo, double hi, double step) {
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
  std::vector<double> nodes(n + 1);
  for (std::size_t k = 0; k <= n; ++k) nodes[k] = lo + (hi - lo) * static_cast<double>(k) / n;
  return nodes;
}

// The travel-time integrand 1/vg peaks inside the density dip; the lattice
// is four times finer wherever it exceeds four times its median.
std::vector<double> travel_nodes(const MediumSpec& spec, double lo, double hi, double step) {
  constexpr int kSamples = 2001;
  std::vector<double> inv(kSamples);
  for (int k = 0; k < kSamples; ++k) inv[k] = 1.0 / spec.vg(lo + (hi - lo) * k / (kSamples - 1));
  std::nth_element(inv.begin(), inv.begin() + kSamples / 2, inv.end());
  const double threshold = 4.0 * inv[kSamples / 2];

  std::vector<double> nodes{lo};
  double z = lo;
  while (z < hi) {
    const double h = 1.0 / spec.vg(z) > threshold ? 0.25 * step : step;
    z = z + h;
    if (z > hi - 1e-3 * h) z = hi;
    nodes.push_back(z);
  }
  return nodes;
}

}  // namespace

CharacteristicMap::CharacteristicMap(const MediumSpec& spec, const Window& window,
                                     Options options)
    : window_(window),
      options_(options),
      v0_(spec.constants.v0),
      x1_(spec.control1.center),
      z1_(spec.z1) {
  if (!(window.x_hi > window.x_lo) || !(window.z_hi > window.z_lo)) {
    throw Error(ErrorCode::invalid_argument, "characteristic window is empty");
  }
  if (!(z1_ >= window.z_lo && z1_ < window.z_hi)) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("entry plane z1={} outside window [{}, {}]", z1_, window.z_lo,
                            window.z_hi));
  }
  if (!(options.x_step > 0.0) || !(options.z_step > 0.0) || !(options.tolerance > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "characteristic map options must be positive");
  }

  // "x -> infinity": first lattice point past x1 where a1 has decayed,
  // located from the Gaussian closed form and checked on the lattice.
  const double reach = spec.control1.width * std::sqrt(-0.5 * std::log(kBeamEdge));
  double steps = std::max(0.0, std::floor(reach / options.x_step) - 1.0);
  while (shape_a1(x1_ + steps * options.x_step, spec) >= kBeamEdge) steps += 1.0;
  x_infinity_ = x1_ + steps * options.x_step;

  const double x_lo = std::min(window.x_lo, x1_);
  const double x_hi = std::max(window.x_hi, x1_ + options.x_step);
  shape_table_ = CumulativeTable([&spec](double x) { return shape_combined(x, spec); },
                                 uniform_nodes(x_lo, x_hi, options.x_step), x1_,
                                 options.tolerance);
  // The total scales with the beam width; so does its attainable accuracy.
  a1_total_ = adaptive_simpson([&spec](double x) { return shape_a1(x, spec); }, x1_,
                               x_infinity_,
                               1e-2 * options.tolerance * std::max(1.0, spec.control1.width));

  travel_table_ = CumulativeTable([&spec](double z) { return 1.0 / spec.vg(z); },
                                  travel_nodes(spec, window.z_lo, window.z_hi, options.z_step),
                                  z1_, options.tolerance);
}

double CharacteristicMap::xi(double x, double z) const {
  return x1_ + shape_table_(x) - v0_ * travel_table_(z);
}

double CharacteristicMap::tau(double t, double x, double z) const {
  if (!(v0_ > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "tau undefined; use static-medium mode (v0 = 0)");
  }
  return t + (xi(x, z) - x) / v0_;
}

double polariton_envelope(double t, double x, double z, const ProbeSpec& probe,
                          const CharacteristicMap& map) {
  const double xi = map.xi(x, z);
  return probe.envelope(xi, map.tau(t, x, z));
}

PolaritonSample field_at(double t, double x, double z, const ProbeSpec& probe,
                         const CharacteristicMap& map, const MediumSpec& spec) {
  const double f = polariton_envelope(t, x, z, probe, map);
  const double a = shape_combined(x, spec);
  return {cplx{std::sqrt(std::abs(a)) * f, 0.0},
          cplx{-collective_coupling(z, spec) / spec.control1.amplitude * f, 0.0}};
}

Trajectory trace_trajectory(double xi0, const CharacteristicMap& map, double dx, double tol) {
  if (!(dx > 0.0)) throw Error(ErrorCode::invalid_argument, "trajectory step must be > 0");
  if (!(map.v0() > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "trajectories need v0 > 0");
  }
  const Window& w = map.window();
  Trajectory out;
  out.xi0 = xi0;
  const auto columns = static_cast<std::size_t>(std::floor((w.x_hi - w.x_lo) / dx + 1e-9));
  for (std::size_t k = 0; k <= columns; ++k) {
    const double x = std::min(w.x_lo + dx * static_cast<double>(k), w.x_hi);
    // xi decreases strictly in z, so a root exists iff the ends bracket xi0.
    double lo = w.z_lo, hi = w.z_hi;
    const double f_lo = map.xi(x, lo) - xi0;
    const double f_hi = map.xi(x, hi) - xi0;
    if (f_lo < 0.0 || f_hi > 0.0) continue;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (map.xi(x, mid) - xi0 > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.points.emplace_back(x, 0.5 * (lo + hi));
  }
  if (out.points.empty()) {
    out.notice = fmt::format("level set xi = {} does not cross the window", xi0);
  }
  return out;
}

double find_z_infinity(const CharacteristicMap& map, double tol) {
  if (!(map.v0() > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "storage plane needs v0 > 0");
  }
  const double target = map.a1_total() / map.v0();
  const CumulativeTable& travel = map.travel_table();
  if (travel(map.window().z_hi) < target) {
    throw Error(ErrorCode::not_stored,
                fmt::format("pulse exits medium; not stored (xi(inf, z_max) = {} >= 0)",
                            map.v0() * (target - travel(map.window().z_hi))));
  }
  double lo = map.z1(), hi = map.window().z_hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (travel(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SpinWaveExtent spin_wave_extent(const ProbeSpec& probe, const CharacteristicMap& map,
                                const MediumSpec& spec) {
  SpinWaveExtent out;
  out.z_infinity = find_z_infinity(map);
  const double v0 = spec.constants.v0;
  out.dx_s = v0 * probe.t_hwhm;
  out.dz_s = probe.x_hwhm * spec.vg(out.z_infinity) / v0;
  if (v0 > 0.2 * probe.x_hwhm / probe.t_hwhm) {
    out.warnings.push_back(fmt::format(
        "v0 = {} is not small against x_hwhm / t_hwhm = {}; extent estimate degraded", v0,
        probe.x_hwhm / probe.t_hwhm));
  }
  return out;
}

const char* to_string(StorageClass c) {
  switch (c) {
    case StorageClass::stored:
      return "stored";
    case StorageClass::marginal:
      return "marginal";
    case StorageClass::escapes:
      return "escapes";
  }
  return "escapes";
}

StorageFeasibility storage_feasibility(const ProbeSpec& probe, double dz_atom,
                                       const CharacteristicMap& map, const MediumSpec& spec) {
  if (!(dz_atom > 0.0)) throw Error(ErrorCode::invalid_argument, "dz_atom must be > 0");
  StorageFeasibility out;
  double z_inf = 0.0;
  try {
    z_inf = find_z_infinity(map);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::not_stored) throw;
    return out;
  }
  if (std::isinf(dz_atom)) {
    out.margin = dz_atom;
  } else {
    out.margin = (spec.constants.v0 / spec.vg(z_inf)) / (probe.x_hwhm / dz_atom);
  }
  if (out.margin >= 5.0) {
    out.verdict = StorageClass::stored;
  } else if (out.margin >= 1.0) {
    out.verdict = StorageClass::marginal;
  }
  return out;
}

double retrieved_width(double dx_p1, const MediumSpec& spec) {
  if (!spec.control2) {
    throw Error(ErrorCode::invalid_argument, "retrieved width needs a second control beam");
  }
  const double a2 = shape_a2(spec.control2->center, spec);
  if (!(a2 > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "second control beam has zero amplitude");
  }
  return dx_p1 / a2;
}

}  // namespace polsim
