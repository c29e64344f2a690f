#include "polsim/workflow.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <map>

#include "polsim/error.hpp"
#include "polsim/snapshot.hpp"

#ifndef POLSIM_VERSION
#define POLSIM_VERSION "0.0.0"
#endif

namespace polsim {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw Error(ErrorCode::io, fmt::format("write failed for '{}'", path.string()));
}

// Creates out_dir/snapshots; refuses to mix with an earlier run's files.
void prepare(const std::string& out_dir) {
  const fs::path snaps = snapshot_dir(out_dir);
  std::error_code ec;
  fs::create_directories(snaps, ec);
  if (ec) {
    throw Error(ErrorCode::io,
                fmt::format("cannot create '{}': {}", snaps.string(), ec.message()));
  }
  for (const auto& entry : fs::directory_iterator(snaps)) {
    if (entry.path().filename().string().rfind("snap_", 0) == 0) {
      throw Error(ErrorCode::io, fmt::format("'{}' already holds snapshots", snaps.string()));
    }
  }
}

std::string manifest(const std::string& kind, const RunConfig& config,
                     const RunSummary& summary) {
  std::string out;
  out += fmt::format("kind={}\n", kind);
  out += fmt::format("polsim_version={}\n", library_version());
  out += fmt::format("snapshot_format=v{}\n", config.output.format_version);
  out += fmt::format("compiler={}\n", __VERSION__);
  out += fmt::format("config=config.cfg\n");
  out += fmt::format("mode={}\n", to_string(config.solver.mode));
  out += fmt::format("nx={}\nnz={}\n", config.grid.nx, config.grid.nz);
  out += fmt::format("dt={}\nsteps={}\nsnapshots={}\n", summary.dt, summary.steps,
                     summary.snapshots);
  out += fmt::format("threads={}\n", config.solver.threads);
  out += fmt::format("wall_seconds={:.3f}\n", summary.wall_seconds);
  for (std::size_t k = 0; k < summary.warnings.size(); ++k) {
    out += fmt::format("warning.{}={}\n", k, summary.warnings[k]);
  }
  return out;
}

struct Manifest {
  std::map<std::string, std::string> values;
};

Manifest read_manifest(const std::string& dir) {
  const fs::path path = fs::path(dir) / "manifest.txt";
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, fmt::format("cannot open '{}'", path.string()));
  Manifest m;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) m.values[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

SolverMode manifest_mode(const std::string& dir) {
  const Manifest m = read_manifest(dir);
  const auto it = m.values.find("mode");
  return it != m.values.end() && it->second == "full" ? SolverMode::full : SolverMode::advection;
}

// Geometry checks do not look at psi_e; it stays empty.
std::vector<SolverState> load_light_fields(const std::string& dir) {
  const SolverMode mode = manifest_mode(dir);
  const std::string snaps = snapshot_dir(dir);
  std::vector<SolverState> out;
  for (std::size_t index : list_snapshots(snaps)) {
    SolverState s;
    s.mode = mode;
    FieldSnapshot e = read_field_snapshot(snapshot_path(snaps, index, FieldName::E));
    FieldSnapshot q = read_field_snapshot(snapshot_path(snaps, index, FieldName::psi_q));
    FieldSnapshot et = read_field_snapshot(snapshot_path(snaps, index, FieldName::E_tilde));
    s.t = e.t;
    s.E = std::move(e.grid);
    s.psi_q = std::move(q.grid);
    s.E_tilde = std::move(et.grid);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

const char* library_version() { return POLSIM_VERSION; }

std::string snapshot_dir(const std::string& run_dir) {
  return (fs::path(run_dir) / "snapshots").string();
}

SolverState characteristic_state(const RunConfig& config, const CharacteristicMap& map,
                                 double t) {
  const Axis x = config.grid.x_axis();
  const Axis z = config.grid.z_axis();
  SolverState state(x, z, config.solver.mode);
  state.t = t;
  const double omega1 = config.medium.control1.amplitude;
  for (std::size_t i = 0; i < x.count; ++i) {
    for (std::size_t j = 0; j < z.count; ++j) {
      const double f = polariton_envelope(t, x.coord(i), z.coord(j), config.probe, map);
      const PolaritonSample s =
          field_at(t, x.coord(i), z.coord(j), config.probe, map, config.medium);
      state.E.at(i, j) = s.E;
      state.psi_q.at(i, j) = s.psi_q;
      state.E_tilde.at(i, j) = cplx{f / omega1, 0.0};
    }
  }
  return state;
}

SolverState initial_state(const RunConfig& config) {
  if (config.initial == InitialState::zero) {
    return SolverState(config.grid.x_axis(), config.grid.z_axis(), config.solver.mode);
  }
  const CharacteristicMap map(config.medium, config.grid.window());
  return characteristic_state(config, map, 0.0);
}

RunSummary run_to_directory(const RunConfig& config, const std::string& out_dir,
                            const RunProgress& progress) {
  RunSummary summary;
  summary.warnings = config.validate();
  prepare(out_dir);
  const auto start = std::chrono::steady_clock::now();

  const SolverState first = initial_state(config);
  const std::string snaps = snapshot_dir(out_dir);
  std::uint64_t steps = 0;
  run(
      config.solver, config.medium, config.probe, config.grid.x_axis(), config.grid.z_axis(),
      [&](const SolverState& s) { write_snapshot(s, snaps, summary.snapshots++); },
      [&](double t, std::uint64_t n) {
        steps = n;
        if (progress) progress(t, n);
      },
      &first);
  summary.steps = steps;
  summary.dt = config.solver.dt > 0.0
                   ? config.solver.dt
                   : config.solver.cfl_safety *
                         stability_bound(config.solver.mode, config.medium, config.grid.x_axis(),
                                         config.grid.z_axis(), config.solver.v_r_enabled);
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  write_text(fs::path(out_dir) / "config.cfg", serialize_config(config));
  write_text(fs::path(out_dir) / "manifest.txt", manifest("run", config, summary));
  return summary;
}

RunSummary characteristics_to_directory(const RunConfig& config, const std::string& out_dir,
                                        const std::vector<double>& xi0_levels,
                                        double trajectory_dx) {
  RunSummary summary;
  summary.warnings = config.validate();
  prepare(out_dir);
  const auto start = std::chrono::steady_clock::now();
  const CharacteristicMap map(config.medium, config.grid.window());

  const std::string snaps = snapshot_dir(out_dir);
  for (double t : snapshot_times(config.solver.t_end, config.solver.snapshot_every)) {
    write_snapshot(characteristic_state(config, map, t), snaps, summary.snapshots++);
  }

  std::string info;
  info += fmt::format("x_infinity={}\na1_total={}\n", map.x_infinity(), map.a1_total());
  try {
    const SpinWaveExtent extent = spin_wave_extent(config.probe, map, config.medium);
    info += fmt::format("z_infinity={}\nextent.dx_s={}\nextent.dz_s={}\n", extent.z_infinity,
                        extent.dx_s, extent.dz_s);
    for (const std::string& w : extent.warnings) summary.warnings.push_back(w);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::not_stored) throw;
    info += fmt::format("z_infinity=none\nnot_stored={}\n", e.what());
  }
  const double dz_atom = config.grid.z_max - config.medium.z1;
  const StorageFeasibility feas = storage_feasibility(config.probe, dz_atom, map, config.medium);
  info += fmt::format("feasibility.dz_atom={}\nfeasibility.margin={}\nfeasibility.verdict={}\n",
                      dz_atom, feas.margin, to_string(feas.verdict));
  write_text(fs::path(out_dir) / "characteristics.txt", info);

  std::string traj;
  for (double xi0 : xi0_levels) {
    const Trajectory tr = trace_trajectory(xi0, map, trajectory_dx);
    traj += fmt::format("# xi0={}\n", xi0);
    if (!tr.notice.empty()) traj += fmt::format("# notice={}\n", tr.notice);
    for (const auto& [x, z] : tr.points) traj += fmt::format("{} {}\n", x, z);
    traj += '\n';
  }
  write_text(fs::path(out_dir) / "trajectories.txt", traj);

  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text(fs::path(out_dir) / "config.cfg", serialize_config(config));
  write_text(fs::path(out_dir) / "manifest.txt", manifest("characteristics", config, summary));
  return summary;
}

double CompareReport::rel_l2(const std::string& field) const {
  for (const auto& [name, v] : rel_l2_all) {
    if (name == field) return v;
  }
  throw Error(ErrorCode::invalid_argument, fmt::format("no comparison for field '{}'", field));
}

std::string CompareReport::text() const {
  std::string out;
  for (const FieldDifference& r : rows) {
    out += fmt::format("t={:<8} {:<8} l2={:<12.6g} linf={:<12.6g} rel_l2={:.6g}\n", r.t, r.field,
                       r.l2, r.linf, r.rel_l2);
  }
  for (std::size_t k = 0; k < rel_l2_all.size(); ++k) {
    out += fmt::format("all      {:<8} rel_l2={:.6g} linf={:.6g}\n", rel_l2_all[k].first,
                       rel_l2_all[k].second, linf_all[k].second);
  }
  return out;
}

std::string CompareReport::key_values() const {
  std::string out;
  for (const FieldDifference& r : rows) {
    out += fmt::format("{}.{}.t={}\n{}.{}.l2={}\n{}.{}.linf={}\n{}.{}.rel_l2={}\n", r.index,
                       r.field, r.t, r.index, r.field, r.l2, r.index, r.field, r.linf, r.index,
                       r.field, r.rel_l2);
  }
  for (std::size_t k = 0; k < rel_l2_all.size(); ++k) {
    out += fmt::format("all.{}.rel_l2={}\nall.{}.linf={}\n", rel_l2_all[k].first,
                       rel_l2_all[k].second, linf_all[k].first, linf_all[k].second);
  }
  return out;
}

CompareReport compare_directories(const std::string& dir_a, const std::string& dir_b) {
  const std::string sa = snapshot_dir(dir_a), sb = snapshot_dir(dir_b);
  const std::vector<std::size_t> ia = list_snapshots(sa), ib = list_snapshots(sb);
  if (ia.empty()) throw Error(ErrorCode::io, fmt::format("no snapshots in '{}'", sa));
  if (ia != ib) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("snapshot sets differ: {} vs {} entries", ia.size(), ib.size()));
  }
  CompareReport report;
  std::map<std::string, std::pair<double, double>> sums;  // diff^2, ref^2
  std::map<std::string, double> worst;
  for (std::size_t index : ia) {
    for (FieldName f : kAllFields) {
      const FieldSnapshot a = read_field_snapshot(snapshot_path(sa, index, f));
      const FieldSnapshot b = read_field_snapshot(snapshot_path(sb, index, f));
      if (!a.grid.same_geometry(b.grid) || a.t != b.t) {
        throw Error(ErrorCode::invalid_argument,
                    fmt::format("snapshot {} {}: time or lattice differs", index, to_string(f)));
      }
      FieldDifference row;
      row.index = index;
      row.t = a.t;
      row.field = to_string(f);
      double d2 = 0.0, r2 = 0.0;
      for (std::size_t k = 0; k < a.grid.size(); ++k) {
        const double d = std::abs(a.grid.values()[k] - b.grid.values()[k]);
        d2 += d * d;
        r2 += std::norm(b.grid.values()[k]);
        row.linf = std::max(row.linf, d);
      }
      const double cell = a.grid.x().step * a.grid.z().step;
      row.l2 = std::sqrt(d2 * cell);
      row.ref_l2 = std::sqrt(r2 * cell);
      row.rel_l2 = row.ref_l2 > 0.0 ? row.l2 / row.ref_l2 : (row.l2 > 0.0 ? INFINITY : 0.0);
      auto& s = sums[row.field];
      s.first += d2 * cell;
      s.second += r2 * cell;
      worst[row.field] = std::max(worst[row.field], row.linf);
      report.rows.push_back(row);
    }
  }
  for (FieldName f : kAllFields) {
    const auto& [d2, r2] = sums[to_string(f)];
    report.rel_l2_all.emplace_back(to_string(f),
                                   r2 > 0.0 ? std::sqrt(d2 / r2) : (d2 > 0.0 ? INFINITY : 0.0));
    report.linf_all.emplace_back(to_string(f), worst[to_string(f)]);
  }
  return report;
}

GeometryReport widths_from_directory(const std::string& dir, std::optional<double> dz_atom) {
  const RunConfig config = load_config((fs::path(dir) / "config.cfg").string());
  const std::vector<SolverState> snaps = load_light_fields(dir);
  if (snaps.empty()) throw Error(ErrorCode::io, fmt::format("no snapshots in '{}'", dir));
  const CharacteristicMap map(config.medium, config.grid.window());
  return verify_geometry(snaps, config.probe, map, config.medium,
                         dz_atom.value_or(config.grid.z_max - config.medium.z1));
}

}  // namespace polsim
