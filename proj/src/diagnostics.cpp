#include "polsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "polsim/error.hpp"

namespace polsim {

namespace {

constexpr double kSignificant = 0.01;  // fraction of the peak density kept by masks
constexpr double kStoredFraction = 0.05;

double half_crossing(std::span<const double> p, const Axis& axis, std::size_t inside,
                     std::size_t outside, double half) {
  // Linear interpolation between a node above half and its neighbour below.
  const double t = (p[inside] - half) / (p[inside] - p[outside]);
  return axis.coord(inside) + t * (axis.coord(outside) - axis.coord(inside));
}

std::vector<double> marginal(const FieldGrid& grid, AxisSelect axis) {
  const std::size_t nx = grid.nx(), nz = grid.nz();
  std::vector<double> out(axis == AxisSelect::x ? nx : nz, 0.0);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nz; ++j) {
      out[axis == AxisSelect::x ? i : j] += std::norm(grid.at(i, j));
    }
  }
  const double d = axis == AxisSelect::x ? grid.z().step : grid.x().step;
  for (double& v : out) v *= d;
  return out;
}

GeometryEntry entry(std::string key, double measured, double predicted) {
  GeometryEntry e;
  e.key = std::move(key);
  e.measured = measured;
  e.predicted = predicted;
  e.deviation = predicted != 0.0 ? std::abs(measured - predicted) / std::abs(predicted)
                                 : std::abs(measured);
  return e;
}

GeometryEntry inapplicable(std::string key, std::string note) {
  GeometryEntry e;
  e.key = std::move(key);
  e.applicable = false;
  e.measured = e.predicted = e.deviation = std::numeric_limits<double>::quiet_NaN();
  e.note = std::move(note);
  return e;
}

// |value|^2 along x on row j, restricted to columns [lo, hi].
std::vector<double> row_profile(const FieldGrid& g, std::size_t j, std::size_t lo,
                                std::size_t hi) {
  std::vector<double> out;
  for (std::size_t i = lo; i <= hi; ++i) out.push_back(std::norm(g.at(i, j)));
  return out;
}

struct ColumnRange {
  std::size_t lo = 0, hi = 0;
  Axis axis;
};

ColumnRange columns_near(const Axis& x, double center, double half_span) {
  const double lo = std::max(x.origin, center - half_span);
  const double hi = std::min(x.last(), center + half_span);
  if (!(hi > lo)) {
    throw Error(ErrorCode::out_of_bounds,
                fmt::format("beam region around x={} lies outside the grid", center));
  }
  ColumnRange r;
  r.lo = static_cast<std::size_t>(std::ceil((lo - x.origin) / x.step - 1e-9));
  r.hi = std::min(x.count - 1,
                  static_cast<std::size_t>(std::floor((hi - x.origin) / x.step + 1e-9)));
  r.axis = Axis{x.coord(r.lo), x.step, r.hi - r.lo + 1};
  return r;
}

double slope_fit(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double st = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    st += t[k];
    sy += y[k];
  }
  const double tm = st / n, ym = sy / n;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    num += (t[k] - tm) * (y[k] - ym);
    den += (t[k] - tm) * (t[k] - tm);
  }
  return num / den;
}

}  // namespace

CentroidWidth profile_centroid_and_width(std::span<const double> p, const Axis& axis) {
  if (p.size() != axis.count) {
    throw Error(ErrorCode::invalid_argument, "profile length does not match its axis");
  }
  double mass = 0.0, moment = 0.0;
  std::size_t peak = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    mass += p[k];
    moment += p[k] * axis.coord(k);
    if (p[k] > p[peak]) peak = k;
  }
  if (!(mass > 0.0)) throw Error(ErrorCode::invalid_argument, "profile is identically zero");

  const double half = 0.5 * p[peak];
  std::size_t k = peak;
  while (k > 0 && p[k - 1] > half) --k;
  const double left = k == 0 ? axis.coord(0) : half_crossing(p, axis, k, k - 1, half);
  k = peak;
  while (k + 1 < p.size() && p[k + 1] > half) ++k;
  const double right =
      k + 1 == p.size() ? axis.last() : half_crossing(p, axis, k, k + 1, half);
  return {moment / mass, 0.5 * (right - left)};
}

CentroidWidth centroid_and_width(const FieldGrid& grid, AxisSelect axis) {
  const std::vector<double> m = marginal(grid, axis);
  if (std::all_of(m.begin(), m.end(), [](double v) { return v == 0.0; })) {
    throw Error(ErrorCode::invalid_argument, "centroid of an all-zero grid");
  }
  return profile_centroid_and_width(m, axis == AxisSelect::x ? grid.x() : grid.z());
}

ExcitationNumbers excitation_numbers(const SolverState& state) {
  return {l2_norm_squared(state.E), l2_norm_squared(state.psi_e), l2_norm_squared(state.psi_q)};
}

double polariton_ratio_check(const SolverState& state, const MediumSpec& spec) {
  const Axis& x = state.x();
  const Axis& z = state.z();
  double peak = 0.0;
  for (std::size_t k = 0; k < state.E.size(); ++k) {
    peak = std::max(peak, std::norm(state.E.values()[k]) + std::norm(state.psi_e.values()[k]) +
                              std::norm(state.psi_q.values()[k]));
  }
  if (!(peak > 0.0)) return 0.0;
  const double c = spec.constants.c;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.count; ++i) {
    const double a = std::abs(shape_combined(x.coord(i), spec));
    if (a <= kBeamEdge) continue;
    for (std::size_t j = 0; j < z.count; ++j) {
      const double e2 = std::norm(state.E.at(i, j));
      const double q2 = std::norm(state.psi_q.at(i, j));
      if (e2 + std::norm(state.psi_e.at(i, j)) + q2 < kSignificant * peak || q2 == 0.0) continue;
      const double vg = std::abs(group_velocity(x.coord(i), z.coord(j), spec));
      worst = std::max(worst, std::abs((e2 / q2) / (vg / c) - 1.0));
    }
  }
  return worst;
}

const GeometryEntry* GeometryReport::find(const std::string& key) const {
  for (const GeometryEntry& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

std::string GeometryReport::text() const {
  std::string out = fmt::format("storage: {} (margin {:.4g})\n", to_string(feasibility.verdict),
                                feasibility.margin);
  if (stored_times.empty()) {
    out += "stored phase: none\n";
  } else {
    out += fmt::format("stored phase: {} snapshot(s), t in [{}, {}]\n", stored_times.size(),
                       stored_times.front(), stored_times.back());
  }
  for (const GeometryEntry& e : entries) {
    if (!e.applicable) {
      out += fmt::format("{:<26} n/a ({})\n", e.key, e.note);
      continue;
    }
    out += fmt::format("{:<26} measured {:<12.6g} predicted {:<12.6g} deviation {:.3f}%", e.key,
                       e.measured, e.predicted, 100.0 * e.deviation);
    if (!e.note.empty()) out += fmt::format("  [{}]", e.note);
    out += '\n';
  }
  return out;
}

std::string GeometryReport::key_values() const {
  std::string out = fmt::format("storage.verdict={}\nstorage.margin={}\nstored.count={}\n",
                                to_string(feasibility.verdict), feasibility.margin,
                                stored_times.size());
  for (const GeometryEntry& e : entries) {
    out += fmt::format("{0}.applicable={1}\n", e.key, e.applicable ? 1 : 0);
    if (!e.applicable) continue;
    out += fmt::format("{0}.measured={1}\n{0}.predicted={2}\n{0}.deviation={3}\n", e.key,
                       e.measured, e.predicted, e.deviation);
  }
  return out;
}

GeometryReport verify_geometry(std::span<const SolverState> snapshots, const ProbeSpec& probe,
                               const CharacteristicMap& map, const MediumSpec& spec,
                               double dz_atom) {
  if (snapshots.empty()) throw Error(ErrorCode::invalid_argument, "no snapshots to analyse");
  GeometryReport report;
  report.feasibility = storage_feasibility(probe, dz_atom, map, spec);

  // Stored phase: photon number below 5% of its run maximum after having
  // been above it, up to the first snapshot where it recovers.
  std::vector<double> photons;
  for (const SolverState& s : snapshots) photons.push_back(l2_norm_squared(s.E));
  const double photon_peak = *std::max_element(photons.begin(), photons.end());
  std::vector<std::size_t> stored;
  std::size_t stored_end = snapshots.size();
  {
    bool seen_light = false;
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
      const bool dark = photons[k] < kStoredFraction * photon_peak;
      if (!dark) {
        if (!stored.empty()) {
          stored_end = k;
          break;
        }
        seen_light = true;
      } else if (seen_light && l2_norm_squared(snapshots[k].psi_q) > 0.0) {
        stored.push_back(k);
      }
    }
  }
  for (std::size_t k : stored) report.stored_times.push_back(snapshots[k].t);

  const char* storage_keys[] = {"stored.dx_s", "stored.dz_s", "stored.z_centroid",
                                "stored.x_drift_slope"};
  const bool can_store = report.feasibility.verdict != StorageClass::escapes && photon_peak > 0.0;
  if (!can_store || stored.empty()) {
    const std::string why = !can_store ? "pulse escapes; no storage expected"
                                       : "run has no stored phase";
    for (const char* key : storage_keys) report.entries.push_back(inapplicable(key, why));
  } else {
    const SpinWaveExtent extent = spin_wave_extent(probe, map, spec);
    const std::string regime =
        extent.warnings.empty() ? std::string{} : std::string{"v0 not small against x/t widths"};
    // Geometry of the spin wave psi_q: its z marginal weights each xi level
    // equally, whereas |E_tilde|^2 carries the vg Jacobian. Shape is read on
    // the last stored snapshot, where the wave has settled; the drift uses
    // all of them.
    std::vector<double> times, xc;
    for (std::size_t k : stored) {
      times.push_back(snapshots[k].t);
      xc.push_back(centroid_and_width(snapshots[k].psi_q, AxisSelect::x).centroid);
    }
    const FieldGrid& g = snapshots[stored.back()].psi_q;
    const CentroidWidth along_z = centroid_and_width(g, AxisSelect::z);
    // The stored sheet is sheared in (x, z); its x extent is read along the
    // row through the peak.
    std::size_t peak = 0;
    for (std::size_t n = 1; n < g.size(); ++n) {
      if (std::norm(g.values()[n]) > std::norm(g.values()[peak])) peak = n;
    }
    const CentroidWidth section =
        profile_centroid_and_width(row_profile(g, peak % g.nz(), 0, g.nx() - 1), g.x());
    GeometryEntry dx = entry("stored.dx_s", section.hwhm, extent.dx_s);
    GeometryEntry dz = entry("stored.dz_s", along_z.hwhm, extent.dz_s);
    dx.note = dz.note = regime;
    report.entries.push_back(dx);
    report.entries.push_back(dz);
    report.entries.push_back(entry("stored.z_centroid", along_z.centroid, extent.z_infinity));
    if (stored.size() >= 2) {
      report.entries.push_back(entry("stored.x_drift_slope", slope_fit(times, xc), map.v0()));
    } else {
      report.entries.push_back(
          inapplicable("stored.x_drift_slope", "needs at least two stored snapshots"));
    }
  }

  if (!spec.control2) return report;

  // Input width: row z1 inside beam 1 at the time of its brightest sample.
  const Axis& x = snapshots.front().x();
  const ControlLaser& c1 = spec.control1;
  const ControlLaser& c2 = *spec.control2;
  const ColumnRange in_cols = columns_near(x, c1.center, 2.0 * c1.width);
  std::size_t in_snap = 0;
  double in_best = -1.0;
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    for (std::size_t i = in_cols.lo; i <= in_cols.hi; ++i) {
      const double v = std::norm(snapshots[k].E_tilde.at(i, 0));
      if (v > in_best) {
        in_best = v;
        in_snap = k;
      }
    }
  }

  // Output width: the brightest beam-2 snapshot after the stored phase, on
  // the row whose centroid sits closest to the beam axis.
  const ColumnRange out_cols = columns_near(x, c2.center, 2.0 * c2.width);
  auto beam2_photons = [&](const SolverState& s) {
    double sum = 0.0;
    for (std::size_t i = out_cols.lo; i <= out_cols.hi; ++i) {
      for (const cplx& v : s.E.column(i)) sum += std::norm(v);
    }
    return sum;
  };
  const std::size_t first = stored.empty() ? 0 : stored_end;
  std::size_t out_snap = snapshots.size();
  double out_best = 0.0;
  for (std::size_t k = first; k < snapshots.size(); ++k) {
    const double v = beam2_photons(snapshots[k]);
    if (v > out_best) {
      out_best = v;
      out_snap = k;
    }
  }
  if (!(in_best > 0.0) || out_snap == snapshots.size()) {
    for (const char* key : {"retrieval.input_hwhm", "retrieval.output_hwhm",
                            "retrieval.width_ratio"}) {
      report.entries.push_back(inapplicable(key, "no retrieved pulse under control2"));
    }
    return report;
  }

  const CentroidWidth input = profile_centroid_and_width(
      row_profile(snapshots[in_snap].E_tilde, 0, in_cols.lo, in_cols.hi), in_cols.axis);

  const FieldGrid& g = snapshots[out_snap].E_tilde;
  std::vector<double> row_mass(g.nz(), 0.0);
  for (std::size_t i = out_cols.lo; i <= out_cols.hi; ++i) {
    for (std::size_t j = 0; j < g.nz(); ++j) row_mass[j] += std::norm(g.at(i, j));
  }
  const double row_peak = *std::max_element(row_mass.begin(), row_mass.end());
  std::size_t best_row = 0;
  double best_offset = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < g.nz(); ++j) {
    if (row_mass[j] < kSignificant * row_peak || !(row_mass[j] > 0.0)) continue;
    const CentroidWidth cw =
        profile_centroid_and_width(row_profile(g, j, out_cols.lo, out_cols.hi), out_cols.axis);
    const double offset = std::abs(cw.centroid - c2.center);
    if (offset < best_offset) {
      best_offset = offset;
      best_row = j;
    }
  }
  const CentroidWidth output = profile_centroid_and_width(
      row_profile(g, best_row, out_cols.lo, out_cols.hi), out_cols.axis);

  GeometryEntry in = entry("retrieval.input_hwhm", input.hwhm, probe.x_hwhm);
  in.note = fmt::format("t={}", snapshots[in_snap].t);
  GeometryEntry out = entry("retrieval.output_hwhm", output.hwhm,
                            retrieved_width(probe.x_hwhm, spec));
  out.note = fmt::format("t={} z={}", snapshots[out_snap].t, g.z().coord(best_row));
  report.entries.push_back(in);
  report.entries.push_back(out);
  report.entries.push_back(
      entry("retrieval.width_ratio", output.hwhm / input.hwhm, retrieved_width(1.0, spec)));
  return report;
}

}  // namespace polsim
