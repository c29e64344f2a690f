#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "polsim/diagnostics.hpp"
#include "polsim/error.hpp"
#include "polsim/solver.hpp"
#include "support.hpp"

using namespace polsim;

namespace {

// No light ever arrives: the probe peak lies far in the future.
ProbeSpec silent_probe() {
  ProbeSpec p;
  p.t_center = 1e4;
  p.t_hwhm = 1.0;
  return p;
}

void set_gaussian(FieldGrid& g, double cx, double cz, double s) {
  for (std::size_t i = 0; i < g.nx(); ++i)
    for (std::size_t j = 0; j < g.nz(); ++j) {
      const double x = g.x().coord(i) - cx, z = g.z().coord(j) - cz;
      g.at(i, j) = std::exp(-(x * x + z * z) / (s * s));
    }
}

SolverConfig advection(double t_end, double every) {
  SolverConfig c;
  c.t_end = t_end;
  c.snapshot_every = every;
  return c;
}

}  // namespace

TEST_CASE("snapshot times") {
  CHECK(snapshot_times(50.0, 5.0).size() == 11);
  CHECK(snapshot_times(0.0, 5.0) == std::vector<double>{0.0});
  CHECK(snapshot_times(7.0, 5.0) == std::vector<double>{0.0, 5.0, 7.0});
}

TEST_CASE("zero end time yields the initial state only") {
  RunConfig cfg = test::fig2();
  cfg.grid.nx = 31;
  cfg.grid.nz = 21;
  SolverConfig sc = cfg.solver;
  sc.t_end = 0.0;
  const auto snaps = run(sc, cfg.medium, cfg.probe, cfg.grid.x_axis(), cfg.grid.z_axis());
  REQUIRE(snaps.size() == 1);
  CHECK(snaps[0].t == 0.0);
  CHECK(excitation_numbers(snaps[0]).total() == 0.0);
}

TEST_CASE("stability bound violations are named") {
  RunConfig cfg = test::fig2();
  cfg.grid.nx = 41;
  cfg.grid.nz = 41;
  SolverConfig sc = cfg.solver;
  sc.dt = 1.0;
  try {
    Stepper s(cfg.medium, cfg.probe, cfg.grid.x_axis(), cfg.grid.z_axis(), sc);
    FAIL("expected a CFL error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::cfl);
    CHECK(std::string(e.what()).find("CFL") != std::string::npos);
  }
}

TEST_CASE("transport creates no new extrema") {
  RunConfig cfg = test::fig2();
  cfg.grid.nx = 121;
  cfg.grid.nz = 81;
  const auto snaps = run(advection(25.0, 2.5), cfg.medium, cfg.probe, cfg.grid.x_axis(),
                         cfg.grid.z_axis());
  const double bound = cfg.probe.amplitude / cfg.medium.control1.amplitude;
  double seen = 0.0;
  for (const SolverState& s : snaps) {
    for (const cplx& v : s.E_tilde.values()) {
      CHECK(v.real() <= bound * (1.0 + 1e-12));
      CHECK(v.real() >= -1e-15);
      CHECK(v.imag() == 0.0);
      seen = std::max(seen, v.real());
    }
  }
  CHECK(seen > 0.1 * bound);
}

TEST_CASE("outside the beams the excitation drifts at the flow speed") {
  MediumSpec m = test::flat_medium(1.0, 0.1);
  m.control1.center = 1e3;
  m.control1.width = 1.0;
  const Axis x = Axis::spanning(-2.0, 3.0, 101), z = Axis::spanning(0.0, 2.0, 41);

  SolverState start(x, z, SolverMode::advection);
  set_gaussian(start.E_tilde, 0.0, 1.0, 0.3);
  const CentroidWidth c0 = centroid_and_width(start.E_tilde, AxisSelect::x);
  const CentroidWidth z0 = centroid_and_width(start.E_tilde, AxisSelect::z);

  for (XTransport mode : {XTransport::lattice, XTransport::upwind}) {
    SolverConfig sc = advection(10.0, 5.0);
    sc.x_transport = mode;
    std::vector<SolverState> snaps;
    run(sc, m, silent_probe(), x, z, [&](const SolverState& s) { snaps.push_back(s); }, {},
        &start);
    const SolverState& last = snaps.back();
    const CentroidWidth c = centroid_and_width(last.E_tilde, AxisSelect::x);
    const CentroidWidth zc = centroid_and_width(last.E_tilde, AxisSelect::z);
    CAPTURE(static_cast<int>(mode));
    if (mode == XTransport::lattice) {
      CHECK(c.centroid - c0.centroid == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(c.hwhm == doctest::Approx(c0.hwhm).epsilon(1e-12));
    } else {
      CHECK(std::abs(c.centroid - c0.centroid - 1.0) < x.step);
    }
    CHECK(zc.centroid == doctest::Approx(z0.centroid).epsilon(1e-12));
  }
}

TEST_CASE("uniform medium translates the pulse along z") {
  const double v = 0.5;
  const MediumSpec m = test::flat_medium(v, 0.0);
  const Axis x = Axis::spanning(-0.5, 0.5, 3), z = Axis::spanning(0.0, 4.0, 401);
  SolverState start(x, z, SolverMode::advection);
  set_gaussian(start.E_tilde, 0.0, 1.0, 0.2);
  for (std::size_t i = 0; i < x.count; ++i)
    for (std::size_t j = 0; j < z.count; ++j)
      start.E_tilde.at(i, j) = std::exp(-std::pow((z.coord(j) - 1.0) / 0.2, 2));
  std::vector<SolverState> snaps;
  run(advection(4.0, 4.0), m, silent_probe(), x, z,
      [&](const SolverState& s) { snaps.push_back(s); }, {}, &start);
  const double moved = centroid_and_width(snaps.back().E_tilde, AxisSelect::z).centroid -
                       centroid_and_width(start.E_tilde, AxisSelect::z).centroid;
  CHECK(std::abs(moved - v * 4.0) < z.step);
}

TEST_CASE("without coupling light and matter evolve independently") {
  // The collective coupling scales as sqrt(c / vg); a huge vg switches it off.
  MediumSpec m = test::flat_medium(1e200, 0.0);
  m.control1.amplitude = 2.0;
  ProbeSpec p;
  p.x_center = 0.0;
  p.x_hwhm = 0.3;
  p.t_center = 0.3;
  p.t_hwhm = 0.1;
  const Axis x = Axis::spanning(-1.0, 1.0, 5), z = Axis::spanning(0.0, 100.0, 201);
  SolverConfig sc;
  sc.mode = SolverMode::full;
  sc.cfl_safety = 0.99;
  sc.t_end = 0.6;
  sc.snapshot_every = 0.6;

  SolverState quiet(x, z, SolverMode::full);
  SolverState busy = quiet;
  set_gaussian(busy.psi_q, 0.0, 60.0, 5.0);
  std::vector<SolverState> a, b;
  run(sc, m, p, x, z, [&](const SolverState& s) { a.push_back(s); }, {}, &quiet);
  run(sc, m, p, x, z, [&](const SolverState& s) { b.push_back(s); }, {}, &busy);
  for (std::size_t k = 0; k < a.back().E.size(); ++k) {
    CHECK(std::abs(a.back().E.values()[k] - b.back().E.values()[k]) < 1e-80);
  }
  // The light pulse moves at c.
  const double zc = centroid_and_width(a.back().E, AxisSelect::z).centroid;
  CHECK(std::abs(zc - 100.0 * (0.6 - 0.3)) < 2.0 * z.step);
  // The matter pair only exchanges population, node by node.
  for (std::size_t k = 0; k < busy.psi_q.size(); ++k) {
    const double before = std::norm(busy.psi_q.values()[k]);
    const double after = std::norm(b.back().psi_q.values()[k]) + std::norm(b.back().psi_e.values()[k]);
    CHECK(std::abs(after - before) < 1e-12);
  }
}

TEST_CASE("excited-state decay removes excitation") {
  RunConfig cfg = load_config(test::preset("full_mb.cfg"));
  cfg.medium.constants.gamma = 0.5;
  cfg.grid.nz = 141;
  const Axis x = cfg.grid.x_axis(), z = cfg.grid.z_axis();
  SolverState start(x, z, SolverMode::full);
  set_gaussian(start.psi_q, 0.0, 3.5, 0.7);
  SolverConfig sc = cfg.solver;
  sc.t_end = 2.0;
  sc.snapshot_every = 0.25;
  std::vector<SolverState> snaps;
  run(sc, cfg.medium, silent_probe(), x, z, [&](const SolverState& s) { snaps.push_back(s); },
      {}, &start);
  for (std::size_t k = 1; k < snaps.size(); ++k) {
    CHECK(excitation_numbers(snaps[k]).total() < excitation_numbers(snaps[k - 1]).total());
  }
}

TEST_CASE("interior excitation is conserved without decay") {
  const RunConfig cfg = load_config(test::preset("full_mb.cfg"));
  const Axis x = cfg.grid.x_axis(), z = cfg.grid.z_axis();
  SolverState start(x, z, SolverMode::full);
  set_gaussian(start.psi_q, 0.0, 2.0, 0.6);
  // Start on the adiabatic manifold so that no fast transient is excited:
  // psi_q = -g sqrt(n) E~, psi_e = i (g sqrt(n) / Omega) dE~/dt, with
  // E~ moving at the slow-light speed.
  for (std::size_t i = 0; i < x.count; ++i) {
    const double omega = total_rabi(x.coord(i), cfg.medium);
    for (std::size_t j = 0; j < z.count; ++j) {
      const double k = collective_coupling(z.coord(j), cfg.medium);
      start.E.at(i, j) = -start.psi_q.at(i, j) * omega / k;
    }
    for (std::size_t j = 1; j + 1 < z.count; ++j) {
      const double k = collective_coupling(z.coord(j), cfg.medium);
      const double vg = cfg.medium.constants.c / (1.0 + k * k / (omega * omega));
      const cplx dz = (start.E.at(i, j + 1) - start.E.at(i, j - 1)) / (2.0 * omega * z.step);
      start.psi_e.at(i, j) = cplx{0.0, 1.0} * (k / omega) * (-vg * dz);
    }
  }
  SolverConfig sc = cfg.solver;
  sc.t_end = 2.0;
  sc.snapshot_every = 0.5;
  std::vector<SolverState> snaps;
  run(sc, cfg.medium, silent_probe(), x, z, [&](const SolverState& s) { snaps.push_back(s); },
      {}, &start);
  const double n0 = excitation_numbers(snaps.front()).total();
  for (const SolverState& s : snaps) {
    CHECK(std::abs(excitation_numbers(s).total() / n0 - 1.0) < 1e-3);
  }
}

TEST_CASE("adiabatic residual of an empty state") {
  const RunConfig cfg = load_config(test::preset("full_mb.cfg"));
  const SolverState s(cfg.grid.x_axis(), cfg.grid.z_axis(), SolverMode::full);
  const AdiabaticResidual r = adiabatic_residual(s, cfg.medium);
  CHECK(r.r_q == 0.0);
  CHECK(r.r_e == 0.0);
}

TEST_CASE("results do not depend on the worker count") {
  RunConfig cfg = test::fig2();
  cfg.grid.nx = 81;
  cfg.grid.nz = 61;
  SolverConfig one = advection(15.0, 5.0), four = one;
  four.threads = 4;
  const auto a = run(one, cfg.medium, cfg.probe, cfg.grid.x_axis(), cfg.grid.z_axis());
  const auto b = run(four, cfg.medium, cfg.probe, cfg.grid.x_axis(), cfg.grid.z_axis());
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    CHECK(std::equal(a[k].E_tilde.values().begin(), a[k].E_tilde.values().end(),
                     b[k].E_tilde.values().begin()));

  RunConfig full = load_config(test::preset("full_mb.cfg"));
  full.grid.nz = 71;
  SolverConfig f1 = full.solver, f4 = full.solver;
  f1.t_end = f4.t_end = 3.0;
  f4.threads = 4;
  const auto c = run(f1, full.medium, full.probe, full.grid.x_axis(), full.grid.z_axis());
  const auto d = run(f4, full.medium, full.probe, full.grid.x_axis(), full.grid.z_axis());
  for (std::size_t k = 0; k < c.size(); ++k)
    CHECK(std::equal(c[k].psi_q.values().begin(), c[k].psi_q.values().end(),
                     d[k].psi_q.values().begin()));
}
