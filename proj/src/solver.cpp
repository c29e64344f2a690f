#include "polsim/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <string>

#include "polsim/error.hpp"

namespace polsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Bound {
  const char* name;
  double value;
};

std::vector<Bound> bounds_for(SolverMode mode, const MediumSpec& spec, const Axis& x,
                              const Axis& z, bool v_r_enabled) {
  const PhysicsConstants& k = spec.constants;
  std::vector<Bound> out;
  if (k.v0 > 0.0) out.push_back({"dx/v0", x.step / k.v0});
  if (mode == SolverMode::advection) {
    double vmax = 0.0;
    for (std::size_t i = 0; i < x.count; ++i) {
      const double a = std::abs(shape_combined(x.coord(i), spec));
      for (std::size_t j = 0; j < z.count; ++j) vmax = std::max(vmax, a * spec.vg(z.coord(j)));
    }
    out.push_back({"dz/max|vg a|", vmax > 0.0 ? z.step / vmax : kInf});
    return out;
  }
  out.push_back({"dz/c", z.step / k.c});
  double omega_max = 0.0;
  for (std::size_t i = 0; i < x.count; ++i) {
    omega_max = std::max(omega_max, total_rabi(x.coord(i), spec));
  }
  double coupling_max = 0.0;
  for (std::size_t j = 0; j < z.count; ++j) {
    coupling_max = std::max(coupling_max, collective_coupling(z.coord(j), spec));
  }
  out.push_back({"1/Omega_max", omega_max > 0.0 ? 1.0 / omega_max : kInf});
  out.push_back({"1/(g sqrt n)_max", coupling_max > 0.0 ? 1.0 / coupling_max : kInf});
  const double detuning = std::abs(cplx(k.Delta, -k.gamma));
  out.push_back({"1/|Delta - i gamma|", detuning > 0.0 ? 1.0 / detuning : kInf});
  if (v_r_enabled && std::abs(k.v_r) > 0.0) out.push_back({"dz/v_r", z.step / std::abs(k.v_r)});
  return out;
}

// First-order upwind update of one column of the z-advection
//   f_t + u(j) f_z = 0
// `low_inflow` is imposed at j = 0 where u > 0; the top row takes zero
// inflow where u < 0.
template <class Speed>
void upwind_column(std::span<const cplx> old, std::span<cplx> out, double r, Speed&& u,
                   cplx low_inflow) {
  const std::size_t n = old.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double s = u(j);
    if (s > 0.0) {
      out[j] = j == 0 ? low_inflow : old[j] - (r * s) * (old[j] - old[j - 1]);
    } else if (s < 0.0) {
      out[j] = j + 1 == n ? cplx{} : old[j] - (r * s) * (old[j + 1] - old[j]);
    } else {
      out[j] = old[j];
    }
  }
}

long long lattice_offset(double v0, double t, double dx) {
  return static_cast<long long>(std::floor(v0 * t / dx + 0.5));
}

using Matrix3 = Eigen::Matrix3cd;

}  // namespace

double stability_bound(SolverMode mode, const MediumSpec& spec, const Axis& x, const Axis& z,
                       bool v_r_enabled) {
  double best = kInf;
  for (const Bound& b : bounds_for(mode, spec, x, z, v_r_enabled)) best = std::min(best, b.value);
  return best;
}

void check_cfl(double dt, double safety, SolverMode mode, const MediumSpec& spec, const Axis& x,
               const Axis& z, bool v_r_enabled) {
  if (!(safety > 0.0 && safety < 1.0)) {
    throw Error(ErrorCode::config, fmt::format("solver.cfl_safety: {} not in (0, 1)", safety));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::cfl, fmt::format("time step {} must be positive and finite", dt));
  }
  for (const Bound& b : bounds_for(mode, spec, x, z, v_r_enabled)) {
    if (dt > safety * b.value * (1.0 + 1e-12)) {
      throw Error(ErrorCode::cfl, fmt::format("CFL violation: dt={} exceeds {} x {} = {}", dt,
                                              safety, b.name, safety * b.value));
    }
  }
}

struct Stepper::Tables {
  Axis x, z;
  std::vector<double> a;          // signed shape a(x_i)
  std::vector<double> vg;         // vg_tilde(z_j)
  std::vector<double> coupling;   // g sqrt(n(z_j))
  std::vector<double> omega;      // total Rabi envelope (full mode)
  std::vector<double> inflow_xi;  // xi(x_i, z1) from the closed-form shape integral
  std::vector<double> inflow_lag; // (xi - x) / v0
  FieldGrid scratch;
  // Cayley propagators per node, keyed by step length (nominal + last other).
  double nominal_h = -1.0, other_h = -1.0;
  std::vector<Matrix3> nominal_u, other_u;
};

Stepper::Stepper(const MediumSpec& spec, const ProbeSpec& probe, const Axis& x, const Axis& z,
                 const SolverConfig& config)
    : spec_(spec), probe_(probe), config_(config), tables_(std::make_unique<Tables>()) {
  if (std::abs(z.origin - spec.z1) > 1e-9 * std::max(1.0, std::abs(spec.z1))) {
    throw Error(ErrorCode::config,
                fmt::format("medium.z1={} must coincide with the lower grid edge z_min={}",
                            spec.z1, z.origin));
  }
  if (config.mode == SolverMode::full && spec.control2 &&
      spec.control2->direction != Direction::plus_z) {
    throw Error(ErrorCode::unsupported,
                "full Maxwell-Bloch mode supports co-propagating control beams only");
  }
  const double bound = stability_bound(config.mode, spec, x, z, config.v_r_enabled);
  nominal_dt_ = config.dt > 0.0 ? config.dt : config.cfl_safety * bound;
  check_cfl(nominal_dt_, config.cfl_safety, config.mode, spec, x, z, config.v_r_enabled);

  Tables& t = *tables_;
  t.x = x;
  t.z = z;
  t.a.resize(x.count);
  t.inflow_xi.resize(x.count);
  t.inflow_lag.resize(x.count);
  const double x1 = spec.control1.center;
  const double v0 = spec.constants.v0;
  for (std::size_t i = 0; i < x.count; ++i) {
    const double xi = x.coord(i);
    t.a[i] = shape_combined(xi, spec);
    t.inflow_xi[i] = v0 > 0.0 ? x1 + shape_integral(xi, spec) : xi;
    t.inflow_lag[i] = v0 > 0.0 ? (t.inflow_xi[i] - xi) / v0 : 0.0;
  }
  t.vg.resize(z.count);
  t.coupling.resize(z.count);
  for (std::size_t j = 0; j < z.count; ++j) {
    t.vg[j] = spec.vg(z.coord(j));
    t.coupling[j] = collective_coupling(z.coord(j), spec);
  }
  if (config.mode == SolverMode::full) {
    t.omega.resize(x.count);
    for (std::size_t i = 0; i < x.count; ++i) t.omega[i] = total_rabi(x.coord(i), spec);
  }
  t.scratch = FieldGrid(x, z);
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

SolverState Stepper::initial_state() const {
  return SolverState(tables_->x, tables_->z, config_.mode);
}

void Stepper::step(SolverState& state, double dt) {
  if (state.mode != config_.mode) {
    throw Error(ErrorCode::invalid_argument,
                fmt::format("state is in {} mode but the stepper runs {} mode",
                            to_string(state.mode), to_string(config_.mode)));
  }
  if (!state.consistent() || !state.E.same_geometry(tables_->scratch)) {
    throw Error(ErrorCode::invalid_argument, "state geometry does not match the stepper");
  }
  if (dt > nominal_dt_ * (1.0 + 1e-12)) {
    check_cfl(dt, config_.cfl_safety, config_.mode, spec_, tables_->x, tables_->z,
              config_.v_r_enabled);
  }
  if (config_.mode == SolverMode::advection) {
    step_advection(state, dt);
  } else {
    step_full(state, dt);
  }
  ++steps_;
}

void Stepper::transport_x(FieldGrid& grid, double t_old, double t_new, double dt) {
  const double v0 = spec_.constants.v0;
  if (!(v0 > 0.0)) return;
  const std::size_t nx = grid.nx(), nz = grid.nz();
  auto values = grid.values();
  if (config_.x_transport == XTransport::lattice) {
    const long long shift =
        lattice_offset(v0, t_new, grid.x().step) - lattice_offset(v0, t_old, grid.x().step);
    if (shift <= 0) return;
    const auto k = static_cast<std::size_t>(std::min<long long>(shift, static_cast<long long>(nx)));
    std::copy_backward(values.begin(), values.end() - static_cast<std::ptrdiff_t>(k * nz),
                       values.end());
    std::fill(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k * nz), cplx{});
    return;
  }
  const double nu = v0 * dt / grid.x().step;
  for (std::size_t i = nx; i-- > 1;) {
    auto col = grid.column(i);
    auto prev = grid.column(i - 1);
    for (std::size_t j = 0; j < nz; ++j) col[j] -= nu * (col[j] - prev[j]);
  }
  for (cplx& v : grid.column(0)) v -= nu * v;
}

void Stepper::step_advection(SolverState& state, double dt) {
  Tables& tb = *tables_;
  const double t_old = state.t;
  const double t_new = t_old + dt;
  const double r = dt / tb.z.step;
  const double omega1 = spec_.control1.amplitude;
  const auto nx = static_cast<long long>(tb.x.count);

  auto inflow = [&](std::size_t i) {
    return cplx{probe_.envelope(tb.inflow_xi[i], t_new + tb.inflow_lag[i]) / omega1, 0.0};
  };

#pragma omp parallel for schedule(static) num_threads(config_.threads)
  for (long long ii = 0; ii < nx; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double a = tb.a[i];
    upwind_column(state.E_tilde.column(i), tb.scratch.column(i), r,
                  [&](std::size_t j) { return a * tb.vg[j]; }, a > 0.0 ? inflow(i) : cplx{});
  }
  std::swap(state.E_tilde, tb.scratch);
  transport_x(state.E_tilde, t_old, t_new, dt);
  // The x shift moved boundary samples; restore the prescribed inflow.
  for (std::size_t i = 0; i < tb.x.count; ++i) {
    if (tb.a[i] > 0.0) state.E_tilde.at(i, 0) = inflow(i);
  }
  state.t = t_new;
}

namespace {

void build_propagators(std::vector<Matrix3>& out, double h, const std::vector<double>& omega,
                       const std::vector<double>& coupling, const PhysicsConstants& k) {
  const std::size_t nx = omega.size(), nz = coupling.size();
  out.resize(nx * nz);
  const cplx half_ih{0.0, 0.5 * h};
  const Matrix3 id = Matrix3::Identity();
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nz; ++j) {
      Matrix3 m;
      m << 0.0, coupling[j], 0.0,
           coupling[j], -cplx(k.Delta, -k.gamma), omega[i],
           0.0, omega[i], -k.delta;
      // Cayley form of exp(i h M): exactly norm preserving for Hermitian M.
      out[i * nz + j] = (id - half_ih * m).partialPivLu().solve(id + half_ih * m);
    }
  }
}

}  // namespace

void Stepper::step_full(SolverState& state, double dt) {
  Tables& tb = *tables_;
  const double t_old = state.t;
  const double t_new = t_old + dt;
  const double r = dt / tb.z.step;
  const double c = spec_.constants.c;
  const auto nx = static_cast<long long>(tb.x.count);
  const std::size_t nz = tb.z.count;

  // Probe field: z transport at c with the incoming envelope at z1.
#pragma omp parallel for schedule(static) num_threads(config_.threads)
  for (long long ii = 0; ii < nx; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    upwind_column(state.E.column(i), tb.scratch.column(i), r, [c](std::size_t) { return c; },
                  cplx{probe_.envelope(tb.x.coord(i), t_new), 0.0});
  }
  std::swap(state.E, tb.scratch);

  // Excitons drift with the atoms; psi_e optionally recoils along z.
  if (config_.v_r_enabled && spec_.constants.v_r != 0.0) {
    const double vr = spec_.constants.v_r;
#pragma omp parallel for schedule(static) num_threads(config_.threads)
    for (long long ii = 0; ii < nx; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      upwind_column(state.psi_e.column(i), tb.scratch.column(i), r,
                    [vr](std::size_t) { return vr; }, cplx{});
    }
    std::swap(state.psi_e, tb.scratch);
  }
  transport_x(state.psi_e, t_old, t_new, dt);
  transport_x(state.psi_q, t_old, t_new, dt);

  // Pointwise interaction over the step.
  std::vector<Matrix3>* table = nullptr;
  if (dt == tb.nominal_h) {
    table = &tb.nominal_u;
  } else if (dt == tb.other_h) {
    table = &tb.other_u;
  } else if (tb.nominal_h < 0.0 || dt == nominal_dt_) {
    build_propagators(tb.nominal_u, dt, tb.omega, tb.coupling, spec_.constants);
    tb.nominal_h = dt;
    table = &tb.nominal_u;
  } else {
    build_propagators(tb.other_u, dt, tb.omega, tb.coupling, spec_.constants);
    tb.other_h = dt;
    table = &tb.other_u;
  }
  auto E = state.E.values();
  auto pe = state.psi_e.values();
  auto pq = state.psi_q.values();
  const auto n = static_cast<long long>(E.size());
#pragma omp parallel for schedule(static) num_threads(config_.threads)
  for (long long kk = 0; kk < n; ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    const Matrix3& u = (*table)[k];
    const cplx e = E[k], p = pe[k], q = pq[k];
    E[k] = u(0, 0) * e + u(0, 1) * p + u(0, 2) * q;
    pe[k] = u(1, 0) * e + u(1, 1) * p + u(1, 2) * q;
    pq[k] = u(2, 0) * e + u(2, 1) * p + u(2, 2) * q;
  }
  (void)nz;
  state.t = t_new;
}

void Stepper::refresh_derived(SolverState& state) const {
  const Tables& tb = *tables_;
  const double omega1 = spec_.control1.amplitude;
  if (state.mode == SolverMode::advection) {
    for (std::size_t i = 0; i < tb.x.count; ++i) {
      const double scale = omega1 * std::sqrt(std::abs(tb.a[i]));
      for (std::size_t j = 0; j < tb.z.count; ++j) {
        const cplx v = state.E_tilde.at(i, j);
        state.E.at(i, j) = scale * v;
        state.psi_q.at(i, j) = -tb.coupling[j] * v;
      }
    }
    state.psi_e.fill(cplx{});
    return;
  }
  for (std::size_t i = 0; i < tb.x.count; ++i) {
    const double om = tb.omega[i];
    const bool inside = om > std::sqrt(kBeamEdge) * omega1;
    for (std::size_t j = 0; j < tb.z.count; ++j) {
      state.E_tilde.at(i, j) = inside ? state.E.at(i, j) / om : cplx{};
    }
  }
}

SolverState step_advection(const SolverState& state, const MediumSpec& spec,
                           const ProbeSpec& probe, double dt) {
  if (state.mode != SolverMode::advection) {
    throw Error(ErrorCode::invalid_argument, "step_advection needs an advection-mode state");
  }
  SolverConfig cfg;
  cfg.mode = SolverMode::advection;
  cfg.dt = dt;
  Stepper stepper(spec, probe, state.x(), state.z(), cfg);
  SolverState next = state;
  stepper.step(next, dt);
  stepper.refresh_derived(next);
  return next;
}

SolverState step_full(const SolverState& state, const MediumSpec& spec, const ProbeSpec& probe,
                      double dt) {
  if (state.mode != SolverMode::full) {
    throw Error(ErrorCode::invalid_argument, "step_full needs a full-mode state");
  }
  SolverConfig cfg;
  cfg.mode = SolverMode::full;
  cfg.dt = dt;
  Stepper stepper(spec, probe, state.x(), state.z(), cfg);
  SolverState next = state;
  stepper.step(next, dt);
  stepper.refresh_derived(next);
  return next;
}

std::vector<double> snapshot_times(double t_end, double every) {
  if (!(t_end >= 0.0)) throw Error(ErrorCode::config, "solver.t_end: must be >= 0");
  if (!(every > 0.0)) throw Error(ErrorCode::config, "solver.snapshot_every: must be > 0");
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * every;
    if (t > t_end * (1.0 + 1e-12) + 1e-12) break;
    out.push_back(std::min(t, t_end));
  }
  if (t_end - out.back() > 1e-9 * std::max(1.0, t_end)) out.push_back(t_end);
  return out;
}

namespace {

void require_finite(const SolverState& s, std::uint64_t step) {
  for (const FieldGrid* g : {&s.E, &s.psi_e, &s.psi_q, &s.E_tilde}) {
    for (const cplx& v : g->values()) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw Error(ErrorCode::numeric,
                    fmt::format("non-finite field value at step {} (t={})", step, s.t));
      }
    }
  }
}

}  // namespace

void run(const SolverConfig& config, const MediumSpec& spec, const ProbeSpec& probe,
         const Axis& x, const Axis& z, const SnapshotSink& sink, const ProgressSink& progress,
         const SolverState* initial) {
  Stepper stepper(spec, probe, x, z, config);
  SolverState state = initial ? *initial : stepper.initial_state();
  const double t0 = state.t;
  const double dt = stepper.nominal_dt();
  for (double offset : snapshot_times(config.t_end, config.snapshot_every)) {
    const double target = t0 + offset;
    while (state.t < target) {
      double h = target - state.t;
      // Avoid a sliver step right before a snapshot.
      if (h > dt * (1.0 + 1e-9)) h = dt;
      stepper.step(state, h);
      if (stepper.steps_taken() % 64 == 0) require_finite(state, stepper.steps_taken());
      if (target - state.t < 1e-12 * std::max(1.0, target)) state.t = target;
    }
    state.t = target;
    stepper.refresh_derived(state);
    require_finite(state, stepper.steps_taken());
    if (progress) progress(state.t, stepper.steps_taken());
    sink(state);
  }
}

std::vector<SolverState> run(const SolverConfig& config, const MediumSpec& spec,
                             const ProbeSpec& probe, const Axis& x, const Axis& z) {
  std::vector<SolverState> out;
  run(config, spec, probe, x, z, [&out](const SolverState& s) { out.push_back(s); });
  return out;
}

AdiabaticResidual adiabatic_residual(const SolverState& state, const MediumSpec& spec) {
  AdiabaticResidual out;
  if (state.mode != SolverMode::full) {
    throw Error(ErrorCode::invalid_argument, "adiabatic residual needs a full-mode state");
  }
  const Axis& x = state.x();
  const Axis& z = state.z();
  const std::size_t nx = x.count, nz = z.count;
  const double omega1 = spec.control1.amplitude;
  const double c = spec.constants.c;
  const double v0 = spec.constants.v0;

  std::vector<double> omega(nx), coupling(nz);
  for (std::size_t i = 0; i < nx; ++i) omega[i] = total_rabi(x.coord(i), spec);
  for (std::size_t j = 0; j < nz; ++j) coupling[j] = collective_coupling(z.coord(j), spec);

  double peak = 0.0;
  for (std::size_t k = 0; k < state.E.size(); ++k) {
    peak = std::max(peak, std::norm(state.E.values()[k]) + std::norm(state.psi_e.values()[k]) +
                              std::norm(state.psi_q.values()[k]));
  }
  if (!(peak > 0.0)) return out;

  constexpr double kBeamFloor = 1e-3;  // Omega / Omega1 below this is outside the beams
  auto aux = [&](std::size_t i, std::size_t j) { return state.E.at(i, j) / omega[i]; };
  auto inside = [&](std::size_t i) { return omega[i] > kBeamFloor * omega1; };

  double q_num = 0.0, q_den = 0.0, e_num = 0.0, e_den = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    if (!inside(i)) continue;
    for (std::size_t j = 0; j < nz; ++j) {
      const double density = std::norm(state.E.at(i, j)) + std::norm(state.psi_e.at(i, j)) +
                             std::norm(state.psi_q.at(i, j));
      if (density < 0.01 * peak) continue;
      const cplx et = aux(i, j);
      q_num += std::norm(state.psi_q.at(i, j) + coupling[j] * et);
      q_den += std::norm(state.psi_q.at(i, j));

      // Centered differences, one-sided at the edges and next to masked columns.
      const std::size_t il = (i > 0 && inside(i - 1)) ? i - 1 : i;
      const std::size_t ir = (i + 1 < nx && inside(i + 1)) ? i + 1 : i;
      const std::size_t jl = j > 0 ? j - 1 : j;
      const std::size_t jr = j + 1 < nz ? j + 1 : j;
      const cplx d_x = il == ir ? cplx{} : (aux(ir, j) - aux(il, j)) / (x.coord(ir) - x.coord(il));
      const cplx d_z = (aux(i, jr) - aux(i, jl)) / (z.coord(jr) - z.coord(jl));
      const double ratio = coupling[j] / omega[i];
      const double n_g = ratio * ratio;
      // (d/dt + v0 d/dx) E~ from the slow-light propagation law.
      const cplx drift = -(c / (1.0 + n_g)) * d_z + (v0 / (1.0 + n_g)) * d_x;
      const cplx predicted = cplx{0.0, 1.0} * ratio * drift;
      e_num += std::norm(state.psi_e.at(i, j) - predicted);
      e_den += std::norm(state.psi_e.at(i, j));
    }
  }
  constexpr double kEps = 1e-300;
  out.r_q = q_den > 0.0 ? std::sqrt(q_num / q_den) : 0.0;
  out.r_e = e_num > 0.0 ? std::sqrt(e_num) / (std::sqrt(e_den) + kEps) : 0.0;
  return out;
}

}  // namespace polsim
